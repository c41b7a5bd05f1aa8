#include "mosqdyn/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mosqdyn {

namespace {

// Coordinates this small are in the underflow zone where strictness of
// inequalities is no longer meaningful; pattern checks skip them.
constexpr double kUnderflowGuard = 1e-290;

double t1_of(const ModelParams& p) { return regime_thresholds(p).t1; }

} // namespace

OrbitBounds orbit_bounds(const ModelParams& p) {
    OrbitBounds b;
    b.x_bound = p.alpha * p.beta / (p.mu * p.d0);
    b.y_bound = p.alpha / p.mu;
    return b;
}

std::optional<std::size_t> verify_eventual_bounds(const Trajectory& traj) {
    if (!traj.params.lemma1_valid)
        throw InvalidParams("verify_eventual_bounds requires a lemma1-valid orbit");
    if (traj.points.empty()) return std::nullopt;

    const OrbitBounds b = orbit_bounds(traj.params);
    const auto& pts = traj.points;

    // Absorption: below a bound stays below it.  The x-step bound needs
    // the adult bound to hold at the same index, so that part is scoped.
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        if (pts[k].y < b.y_bound && pts[k + 1].y >= b.y_bound * (1.0 + 1e-12))
            throw std::logic_error("adult bound failed to absorb the orbit");
        if (pts[k].x < b.x_bound && pts[k].y < b.y_bound &&
            pts[k + 1].x >= b.x_bound * (1.0 + 1e-12))
            throw std::logic_error("larvae bound failed to absorb the orbit");
    }

    // Earliest suffix on which both bounds hold.
    std::size_t m = pts.size();
    for (std::size_t k = pts.size(); k-- > 0;) {
        if (pts[k].x < b.x_bound && pts[k].y < b.y_bound)
            m = k;
        else
            break;
    }
    if (m == pts.size()) return std::nullopt;  // horizon too short
    return traj.first_index + m;
}

std::optional<std::size_t> monotone_tail(Trajectory& traj) {
    const ModelParams& p = traj.params;
    if (!p.lemma1_valid)
        throw InvalidParams("monotone_tail requires a lemma1-valid orbit");
    if (!(p.beta < t1_of(p)))
        throw InvalidParams(
            "monotone_tail requires beta < mu*(1 + d0/alpha)");
    const auto& pts = traj.points;
    if (pts.empty()) return std::nullopt;

    // Joint strict decrease must propagate to the next step.
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        const bool premise =
            pts[k - 1].x > pts[k].x && pts[k - 1].y > pts[k].y;
        if (!premise) continue;
        if (pts[k].x < kUnderflowGuard && pts[k].y < kUnderflowGuard) continue;
        if (!(pts[k].x > pts[k + 1].x && pts[k].y > pts[k + 1].y))
            throw std::logic_error(
                "joint strict decrease failed to propagate along the orbit");
    }

    std::size_t m = pts.size() - 1;
    for (std::size_t k = pts.size() - 1; k-- > 0;) {
        if (pts[k + 1].x <= pts[k].x && pts[k + 1].y <= pts[k].y)
            m = k;
        else
            break;
    }
    if (pts.size() > 1 && m == pts.size() - 1) return std::nullopt;

    traj.monotone_tail_start = traj.first_index + m;
    return traj.monotone_tail_start;
}

OrbitPropertyReport check_orbit_properties(const Trajectory& traj) {
    const ModelParams& p = traj.params;
    if (!p.lemma1_valid || !(p.beta < t1_of(p)))
        throw InvalidParams(
            "orbit pattern checks apply to the beta < t1 regime");

    OrbitPropertyReport rep;
    const auto& pts = traj.points;
    const OrbitBounds b = orbit_bounds(p);

    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        if (!rep.joint_increase_at && pts[k + 1].x > pts[k].x &&
            pts[k + 1].y > pts[k].y)
            rep.joint_increase_at = traj.first_index + k;

        if (!rep.absorption_violation_at) {
            const bool y_broken = pts[k].y < b.y_bound &&
                                  pts[k + 1].y >= b.y_bound * (1.0 + 1e-12);
            const bool x_broken = pts[k].x < b.x_bound &&
                                  pts[k].y < b.y_bound &&
                                  pts[k + 1].x >= b.x_bound * (1.0 + 1e-12);
            if (y_broken || x_broken)
                rep.absorption_violation_at = traj.first_index + k;
        }
    }

    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        if (!rep.decrease_propagation_break_at &&
            pts[k - 1].x > pts[k].x && pts[k - 1].y > pts[k].y &&
            !(pts[k].x < kUnderflowGuard && pts[k].y < kUnderflowGuard) &&
            !(pts[k].x > pts[k + 1].x && pts[k].y > pts[k + 1].y))
            rep.decrease_propagation_break_at = traj.first_index + k;
    }

    // Opposed-monotone steps (one coordinate strictly up, the other
    // strictly down) occur freely in transients; what is excluded is the
    // pattern persisting forever.  On a stored orbit that reads: the
    // final stretch must not consist of opposed steps only.  Meaningful
    // on orbits iterated to convergence.
    if (pts.size() >= 2) {
        auto opposed = [&](std::size_t j) {
            const bool x_up = pts[j + 1].x > pts[j].x;
            const bool x_down = pts[j + 1].x < pts[j].x;
            const bool y_up = pts[j + 1].y > pts[j].y;
            const bool y_down = pts[j + 1].y < pts[j].y;
            return (x_up && y_down) || (x_down && y_up);
        };
        const std::size_t last = pts.size() - 2;
        if (opposed(last)) {
            std::size_t k = last;
            while (k > 0 && opposed(k - 1)) --k;
            rep.oscillation_pattern_at = traj.first_index + k;
        }
    }

    // Geometric decay envelopes.  The adult envelope is unconditional;
    // the larvae recursion needs y < alpha/mu, so its envelope anchors at
    // the first index where that holds.
    if (!pts.empty()) {
        const double slack =
            1e-9 * std::max({1.0, pts.front().x, pts.front().y, b.x_bound,
                             b.y_bound});
        double decay_y = 1.0;
        const double y0_gap = pts.front().y - b.y_bound;
        std::optional<std::size_t> anchor;
        double decay_x = 1.0;
        double x_anchor_gap = 0.0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (k > 0) decay_y *= (1.0 - p.mu);
            const double env_y = b.y_bound + decay_y * y0_gap;
            if (!rep.y_envelope_violation_at && pts[k].y > env_y + slack)
                rep.y_envelope_violation_at = traj.first_index + k;

            if (!anchor && pts[k].y < b.y_bound) {
                anchor = k;
                x_anchor_gap = pts[k].x - b.x_bound;
                decay_x = 1.0;
            } else if (anchor) {
                decay_x *= (1.0 - p.d0);
                const double env_x = b.x_bound + decay_x * x_anchor_gap;
                if (!rep.x_envelope_violation_at && pts[k].x > env_x + slack)
                    rep.x_envelope_violation_at = traj.first_index + k;
            }
        }
    }
    return rep;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::ConvergedToOrigin: return "ConvergedToOrigin";
        case Verdict::ConvergedToInterior: return "ConvergedToInterior";
        case Verdict::Undetermined: return "Undetermined";
    }
    return "?";
}

const char* to_string(SweepVerdict v) {
    switch (v) {
        case SweepVerdict::ConvergedToOrigin: return "ConvergedToOrigin";
        case SweepVerdict::ConvergedToInterior: return "ConvergedToInterior";
        case SweepVerdict::Undetermined: return "Undetermined";
        case SweepVerdict::Exploratory: return "Exploratory";
        case SweepVerdict::Error: return "Error";
    }
    return "?";
}

ConvergenceReport converges_to_origin(const ModelParams& p, const State2& s0,
                                      double tol, std::size_t max_iter) {
    if (!p.lemma1_valid)
        throw InvalidParams("converges_to_origin requires lemma1-valid parameters");
    if (!(p.beta < t1_of(p)))
        throw InvalidParams(
            "converges_to_origin requires beta < mu*(1 + d0/alpha)");
    if (!s0.in_quadrant())
        throw std::invalid_argument("start must lie in the nonnegative quadrant");

    ConvergenceReport rep;
    rep.params = p;
    rep.start = s0;
    rep.tol = tol;

    Trajectory traj;
    traj.params = p;
    traj.points.reserve(1024);
    traj.points.push_back(s0);

    State2 cur = s0;
    bool hit = std::max(std::fabs(cur.x), std::fabs(cur.y)) < tol;
    std::size_t steps = 0;
    while (!hit && steps < max_iter) {
        const State2 next = step_w0(cur, p);
        ++steps;
        const double diff = max_norm_distance(next, cur);
        traj.points.push_back(next);
        cur = next;
        hit = std::max(std::fabs(cur.x), std::fabs(cur.y)) < tol && diff < tol;
    }

    rep.iterations_used = steps;
    rep.final_state = cur;
    rep.verdict = hit ? Verdict::ConvergedToOrigin : Verdict::Undetermined;
    rep.bound_entry_index = verify_eventual_bounds(traj);
    rep.monotone_tail_index = monotone_tail(traj);

    const OrbitPropertyReport checks = check_orbit_properties(traj);
    if (checks.joint_increase_at && rep.bound_entry_index &&
        *checks.joint_increase_at >= *rep.bound_entry_index)
        throw std::logic_error(
            "both coordinates increased inside the absorbed region");
    return rep;
}

namespace {

SweepRow sweep_cell(double alpha, double beta, double mu, double d0,
                    const State2& s0, const SweepOptions& opts) {
    SweepRow row;
    row.alpha = alpha;
    row.beta = beta;
    row.mu = mu;
    row.d0 = d0;
    try {
        const ModelParams p = validate_params(alpha, beta, mu, d0, 0.0);
        if (!p.lemma1_valid) {
            row.error = *lemma1_violation(p);
            row.verdict = SweepVerdict::Error;
            return row;
        }
        row.regime = origin_regime(p);

        if (p.beta < t1_of(p)) {
            const ConvergenceReport rep =
                converges_to_origin(p, s0, opts.tol, opts.max_iter);
            row.iterations = rep.iterations_used;
            row.verdict = rep.verdict == Verdict::ConvergedToOrigin
                              ? SweepVerdict::ConvergedToOrigin
                              : SweepVerdict::Undetermined;
            return row;
        }

        // Unstudied regime: label Exploratory and record what the orbit
        // did as an observation only.
        row.verdict = SweepVerdict::Exploratory;
        IterateOptions it;
        it.max_steps = opts.max_iter;
        it.stop_tol = opts.tol;
        const Trajectory traj = iterate_w0(s0, p, it);
        row.iterations = traj.last_index();
        if (traj.converged) {
            const State2 lim = traj.converged->limit;
            if (std::max(std::fabs(lim.x), std::fabs(lim.y)) < opts.tol) {
                row.empirical = Verdict::ConvergedToOrigin;
                row.limit = State2{0.0, 0.0};
                row.limit_residual = 0.0;
            } else {
                const double res = max_norm_distance(step_w0(lim, p), lim);
                if (res < 10.0 * opts.tol) {
                    row.empirical = Verdict::ConvergedToInterior;
                    row.limit = lim;
                    row.limit_residual = res;
                } else {
                    row.empirical = Verdict::Undetermined;
                }
            }
        } else {
            row.empirical = Verdict::Undetermined;
        }
    } catch (const std::exception& ex) {
        row.verdict = SweepVerdict::Error;
        row.error = ex.what();
    }
    return row;
}

} // namespace

std::vector<SweepRow> sweep_regimes(const SweepGrid& grid, const State2& s0,
                                    const SweepOptions& opts) {
    const std::size_t cells = grid.size();
    std::vector<SweepRow> rows(cells);
    if (cells == 0) return rows;

    const std::size_t nb = grid.beta.size();
    const std::size_t nm = grid.mu.size();
    const std::size_t nd = grid.d0.size();

    auto run_cell = [&](std::size_t idx) {
        const std::size_t id = idx % nd;
        const std::size_t im = (idx / nd) % nm;
        const std::size_t ib = (idx / (nd * nm)) % nb;
        const std::size_t ia = idx / (nd * nm * nb);
        rows[idx] = sweep_cell(grid.alpha[ia], grid.beta[ib], grid.mu[im],
                               grid.d0[id], s0, opts);
    };

    unsigned n_threads = opts.threads != 0 ? opts.threads
                                           : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, cells));

    if (n_threads == 1) {
        for (std::size_t i = 0; i < cells; ++i) run_cell(i);
        return rows;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < cells;
                 i = next.fetch_add(1))
                run_cell(i);
        });
    }
    for (auto& th : pool) th.join();
    return rows;
}

} // namespace mosqdyn
