// mosqdyn -- command-line front end for the two-stage mosquito map:
// orbit simulation, fixed-point classification, the normalized map on the
// simplex, and parameter-regime sweeps.  Emits machine-readable CSV/JSON
// (plot data; no rendering here).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mosqdyn/analysis.hpp"
#include "mosqdyn/dynamics.hpp"
#include "mosqdyn/io.hpp"
#include "mosqdyn/params.hpp"
#include "mosqdyn/simplex.hpp"
#include "mosqdyn/spectral.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitUndetermined = 3;

using nlohmann::json;

std::size_t default_max_iter() {
    if (const char* env = std::getenv("MOSQ_DYN_MAX_ITER")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        std::cerr << "warning: ignoring malformed MOSQ_DYN_MAX_ITER=" << env
                  << "\n";
    }
    return 100000;
}

struct ParamFlags {
    double alpha = 0, beta = 0, mu = 0, d0 = 0, d1 = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--alpha", alpha, "maximum emergence rate")->required();
        cmd->add_option("--beta", beta, "oviposition rate")->required();
        cmd->add_option("--mu", mu, "adult death rate")->required();
        cmd->add_option("--d0", d0, "density-independent larvae death rate")
            ->required();
        cmd->add_option("--d1", d1,
                        "density-dependent larvae death coefficient "
                        "(raw-operator exploration only)");
    }
};

struct OutputFlags {
    std::string format = "json";
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out, "write output to this file instead of stdout");
    }
};

int emit(const OutputFlags& of, const std::string& text) {
    if (of.out.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream f(of.out, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open " << of.out << " for writing\n";
        return kExitInvalidInput;
    }
    f << text;
    return kExitOk;
}

std::string dump_envelope(const json& envelope) {
    return envelope.dump(2) + "\n";
}

// Validates and additionally requires the quadrant-invariant family,
// printing the violated condition the way the analytical commands need.
mosqdyn::ModelParams require_lemma1(const ParamFlags& pf) {
    const mosqdyn::ModelParams p =
        mosqdyn::validate_params(pf.alpha, pf.beta, pf.mu, pf.d0, pf.d1);
    if (!p.lemma1_valid) {
        std::ostringstream os;
        os << "parameters violate the invariant-domain condition: "
           << *mosqdyn::lemma1_violation(p);
        throw mosqdyn::InvalidParams(os.str());
    }
    return p;
}

// "v" or "lo:hi:step" -> list of grid values.
std::vector<double> parse_range(const std::string& spec) {
    std::vector<double> out;
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(spec);
    while (std::getline(is, cur, ':')) parts.push_back(cur);
    auto to_d = [&](const std::string& s) {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("bad number: " + s);
        return v;
    };
    if (parts.size() == 1) {
        out.push_back(to_d(parts[0]));
        return out;
    }
    if (parts.size() != 3)
        throw std::invalid_argument("range must be value or lo:hi:step: " + spec);
    const double lo = to_d(parts[0]), hi = to_d(parts[1]), step = to_d(parts[2]);
    if (!(step > 0.0) || hi < lo)
        throw std::invalid_argument("range needs lo <= hi and step > 0: " + spec);
    const std::size_t n =
        static_cast<std::size_t>((hi - lo) / step + 0.5) + 1;
    for (std::size_t k = 0; k < n; ++k) {
        const double v = lo + static_cast<double>(k) * step;
        if (v > hi + 0.5 * step) break;
        out.push_back(v);
    }
    return out;
}

int cmd_simulate(const ParamFlags& pf, const OutputFlags& of, double x0,
                 double y0, std::size_t steps, double tol,
                 const std::string& op) {
    using namespace mosqdyn;
    const State2 start{x0, y0};

    if (op == "w") {
        // Raw-operator exploration: only the basic sign constraints are
        // required; the orbit stops when it leaves the quadrant.
        const ModelParams p =
            validate_params(pf.alpha, pf.beta, pf.mu, pf.d0, pf.d1);
        Trajectory traj;
        traj.params = p;
        traj.points.push_back(start);
        std::optional<std::size_t> left_at;
        State2 cur = start;
        for (std::size_t k = 1; k <= steps; ++k) {
            const StepResult r = step_w(cur, p);
            if (max_norm_distance(r.value, cur) < tol) {
                traj.converged = Converged{r.value, tol};
                break;
            }
            traj.points.push_back(r.value);
            cur = r.value;
            if (r.left_quadrant) {
                left_at = k;
                break;
            }
        }
        if (of.format == "csv") {
            std::ostringstream os;
            write_trajectory_csv(os, traj);
            const int rc = emit(of, os.str());
            if (rc != kExitOk) return rc;
        } else {
            json payload = traj;
            payload["operator"] = "w";
            payload["left_quadrant_at"] =
                left_at ? json(*left_at) : json(nullptr);
            const int rc = emit(of, dump_envelope(make_envelope("simulate", p,
                                                                payload)));
            if (rc != kExitOk) return rc;
        }
        return traj.converged ? kExitOk : kExitUndetermined;
    }

    const ModelParams p = require_lemma1(pf);
    IterateOptions opts;
    opts.max_steps = steps;
    opts.stop_tol = tol;
    const Trajectory traj = iterate_w0(start, p, opts);

    if (of.format == "csv") {
        std::ostringstream os;
        write_trajectory_csv(os, traj);
        const int rc = emit(of, os.str());
        if (rc != kExitOk) return rc;
    } else {
        json payload = traj;
        payload["operator"] = "w0";
        const int rc =
            emit(of, dump_envelope(make_envelope("simulate", p, payload)));
        if (rc != kExitOk) return rc;
    }
    return traj.converged ? kExitOk : kExitUndetermined;
}

int cmd_fixed_points(const ParamFlags& pf, const OutputFlags& of, double tol) {
    using namespace mosqdyn;
    const ModelParams p = require_lemma1(pf);

    const auto points = fixed_points_w0(p);
    std::vector<FixedPointReport> reports;
    reports.reserve(points.size());
    for (const auto& z : points) reports.push_back(classify_fixed_point(p, z, tol));

    if (of.format == "csv") {
        std::ostringstream os;
        os << "x,y,lambda1_re,lambda1_im,lambda2_re,lambda2_im,modulus1,"
              "modulus2,stability\n";
        for (const auto& r : reports) {
            os << format_double(r.location.x) << ','
               << format_double(r.location.y) << ','
               << format_double(r.eigenvalues.first.real()) << ','
               << format_double(r.eigenvalues.first.imag()) << ','
               << format_double(r.eigenvalues.second.real()) << ','
               << format_double(r.eigenvalues.second.imag()) << ','
               << format_double(std::abs(r.eigenvalues.first)) << ','
               << format_double(std::abs(r.eigenvalues.second)) << ','
               << to_string(r.stability) << '\n';
        }
        return emit(of, os.str());
    }
    json payload;
    payload["thresholds"] = regime_thresholds(p);
    payload["origin_regime"] = to_string(origin_regime(p));
    payload["fixed_points"] = reports;
    return emit(of, dump_envelope(make_envelope("fixed-points", p, payload)));
}

int cmd_normalized(const ParamFlags& pf, const OutputFlags& of,
                   const std::string& mode, double x0, std::size_t steps,
                   double tol, std::size_t samples) {
    using namespace mosqdyn;
    const ModelParams p = require_lemma1(pf);

    if (mode == "graph") {
        // x vs T(x) over a uniform grid, the plot data for the map itself.
        if (samples < 2) throw std::invalid_argument("--samples must be >= 2");
        std::vector<double> xs(samples), ts(samples);
        for (std::size_t i = 0; i < samples; ++i) {
            xs[i] = static_cast<double>(i) / static_cast<double>(samples - 1);
            ts[i] = t_map(xs[i], p);
        }
        if (of.format == "csv") {
            std::ostringstream os;
            os << "x,t\n";
            for (std::size_t i = 0; i < samples; ++i)
                os << format_double(xs[i]) << ',' << format_double(ts[i])
                   << '\n';
            return emit(of, os.str());
        }
        json payload = {{"x", xs},
                        {"t", ts},
                        {"fixed_point", t_fixed_point(p)}};
        return emit(of, dump_envelope(make_envelope("normalized", p, payload)));
    }

    if (mode == "orbit") {
        if (!(x0 >= 0.0 && x0 <= 1.0))
            throw std::invalid_argument("--x0 must lie in [0,1]");
        std::vector<double> orbit{x0};
        bool converged = false;
        double x = x0;
        for (std::size_t k = 1; k <= steps; ++k) {
            const double next = t_map(x, p);
            if (std::fabs(next - x) < tol) {
                converged = true;
                x = next;
                break;
            }
            orbit.push_back(next);
            x = next;
        }
        if (of.format == "csv") {
            std::ostringstream os;
            os << "n,x\n";
            for (std::size_t k = 0; k < orbit.size(); ++k)
                os << k << ',' << format_double(orbit[k]) << '\n';
            const int rc = emit(of, os.str());
            if (rc != kExitOk) return rc;
        } else {
            json payload = {{"orbit", orbit},
                            {"converged", converged},
                            {"limit", converged ? json(x) : json(nullptr)},
                            {"fixed_point", t_fixed_point(p)}};
            const int rc = emit(
                of, dump_envelope(make_envelope("normalized", p, payload)));
            if (rc != kExitOk) return rc;
        }
        return converged ? kExitOk : kExitUndetermined;
    }

    json payload;
    std::ostringstream csv;
    if (mode == "fixed-point") {
        const double xs = t_fixed_point(p);
        const double mult = t_fixed_point_stability(p);
        const CardanoCrossCheck cardano = t_fixed_point_cardano(p);
        payload = {{"x_star", xs},
                   {"multiplier", mult},
                   {"cardano", cardano},
                   {"cardano_discrepancy",
                    cardano.found ? json(std::fabs(cardano.value - xs))
                                  : json(nullptr)}};
        csv << "x_star,multiplier\n"
            << format_double(xs) << ',' << format_double(mult) << '\n';
    } else if (mode == "profile") {
        const MonotonicityProfile prof = t_monotonicity_profile(p);
        payload = prof;
        csv << "shape,case_tag,x_min\n"
            << to_string(prof.shape) << ',' << to_string(prof.case_tag) << ','
            << (prof.x_min ? format_double(*prof.x_min) : "") << '\n';
    } else {  // period2
        const Period2Certificate cert = period2_certificate(p);
        payload = cert;
        csv << "A,B,C,max_on_unit_interval,conclusion\n"
            << format_double(cert.A) << ',' << format_double(cert.B) << ','
            << format_double(cert.C) << ','
            << format_double(cert.max_quadratic_on_unit_interval) << ','
            << (cert.conclusion ? "true" : "false") << '\n';
    }
    if (of.format == "csv") return emit(of, csv.str());
    return emit(of, dump_envelope(make_envelope("normalized", p, payload)));
}

int cmd_sweep(const std::string& alpha_spec, const std::string& beta_spec,
              const std::string& mu_spec, const std::string& d0_spec,
              const OutputFlags& of, double x0, double y0, std::size_t steps,
              double tol, unsigned threads) {
    using namespace mosqdyn;
    SweepGrid grid;
    grid.alpha = parse_range(alpha_spec);
    grid.beta = parse_range(beta_spec);
    grid.mu = parse_range(mu_spec);
    grid.d0 = parse_range(d0_spec);

    SweepOptions opts;
    opts.max_iter = steps;
    opts.tol = tol;
    opts.threads = threads;
    const auto rows = sweep_regimes(grid, State2{x0, y0}, opts);

    std::size_t valid = 0;
    std::map<std::string, std::size_t> regime_counts;
    for (const auto& r : rows) {
        if (r.verdict != SweepVerdict::Error) ++valid;
        regime_counts[r.regime ? to_string(*r.regime) : "Invalid"]++;
    }
    if (rows.empty() || valid == 0) {
        std::cerr << "error: sweep grid contains no valid cells\n";
        return kExitInvalidInput;
    }

    int rc;
    if (of.format == "csv") {
        std::ostringstream os;
        write_sweep_csv(os, rows);
        rc = emit(of, os.str());
    } else {
        ModelParams echo;  // no single parameter set for a grid; echo zeros
        json payload = {{"rows", rows},
                        {"cells", rows.size()},
                        {"valid_cells", valid}};
        rc = emit(of, dump_envelope(make_envelope("sweep", echo, payload)));
    }
    if (rc != kExitOk) return rc;

    std::ostream& summary = of.out.empty() ? std::cerr : std::cout;
    summary << "cells: " << rows.size() << " (" << valid << " valid)\n";
    for (const auto& [name, count] : regime_counts)
        summary << "  " << name << ": " << count << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Discrete-time two-stage mosquito population dynamics: simulation, "
        "spectral classification, the normalized interval map, and regime "
        "sweeps"};
    app.require_subcommand(1);

    const std::size_t default_steps = default_max_iter();

    // simulate
    auto* sim = app.add_subcommand("simulate", "iterate the map from a start point");
    ParamFlags sim_p;
    OutputFlags sim_o;
    sim_p.attach(sim);
    sim_o.attach(sim);
    double sim_x0 = 0, sim_y0 = 0, sim_tol = 1e-10;
    std::size_t sim_steps = default_steps;
    std::string sim_op = "w0";
    sim->add_option("--x0", sim_x0, "initial larvae density")->required();
    sim->add_option("--y0", sim_y0, "initial adult density")->required();
    sim->add_option("--steps", sim_steps, "iteration budget");
    sim->add_option("--tol", sim_tol, "successive-difference stop tolerance");
    sim->add_option("--operator", sim_op,
                    "w0 (quadrant-invariant family, default) or w (raw map, "
                    "charts quadrant exit)")
        ->check(CLI::IsMember({"w0", "w"}));

    // fixed-points
    auto* fix = app.add_subcommand("fixed-points",
                                   "fixed points with spectral classification");
    ParamFlags fix_p;
    OutputFlags fix_o;
    fix_p.attach(fix);
    fix_o.attach(fix);
    double fix_tol = 1e-9;
    fix->add_option("--tol", fix_tol, "non-hyperbolicity tolerance on |lambda|-1");

    // normalized
    auto* nrm = app.add_subcommand("normalized",
                                   "the induced interval map on the simplex");
    ParamFlags nrm_p;
    OutputFlags nrm_o;
    nrm_p.attach(nrm);
    nrm_o.attach(nrm);
    std::string nrm_mode;
    double nrm_x0 = 0, nrm_tol = 1e-10;
    std::size_t nrm_steps = default_steps;
    std::size_t nrm_samples = 1001;
    nrm->add_option("--mode", nrm_mode,
                    "orbit | fixed-point | profile | period2 | graph")
        ->required()
        ->check(CLI::IsMember(
            {"orbit", "fixed-point", "profile", "period2", "graph"}));
    nrm->add_option("--x0", nrm_x0, "initial point in [0,1] (orbit mode)");
    nrm->add_option("--steps", nrm_steps, "iteration budget (orbit mode)");
    nrm->add_option("--tol", nrm_tol, "stop tolerance (orbit mode)");
    nrm->add_option("--samples", nrm_samples, "grid size (graph mode)");

    // sweep
    auto* swp = app.add_subcommand("sweep", "regime table over a parameter grid");
    OutputFlags swp_o;
    swp_o.attach(swp);
    std::string swp_a, swp_b, swp_m, swp_d;
    double swp_x0 = 0.002, swp_y0 = 0.2, swp_tol = 1e-10;
    std::size_t swp_steps = default_steps;
    unsigned swp_threads = 0;
    swp->add_option("--alpha", swp_a, "value or lo:hi:step")->required();
    swp->add_option("--beta", swp_b, "value or lo:hi:step")->required();
    swp->add_option("--mu", swp_m, "value or lo:hi:step")->required();
    swp->add_option("--d0", swp_d, "value or lo:hi:step")->required();
    swp->add_option("--x0", swp_x0, "initial larvae density");
    swp->add_option("--y0", swp_y0, "initial adult density");
    swp->add_option("--steps", swp_steps, "per-cell iteration budget");
    swp->add_option("--tol", swp_tol, "per-cell stop tolerance");
    swp->add_option("--threads", swp_threads, "worker threads (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(sim_p, sim_o, sim_x0, sim_y0, sim_steps,
                                sim_tol, sim_op);
        if (fix->parsed()) return cmd_fixed_points(fix_p, fix_o, fix_tol);
        if (nrm->parsed())
            return cmd_normalized(nrm_p, nrm_o, nrm_mode, nrm_x0, nrm_steps,
                                  nrm_tol, nrm_samples);
        if (swp->parsed())
            return cmd_sweep(swp_a, swp_b, swp_m, swp_d, swp_o, swp_x0, swp_y0,
                             swp_steps, swp_tol, swp_threads);
    } catch (const mosqdyn::MaxIterExceeded& e) {
        std::cerr << "undetermined: " << e.what() << "\n";
        return kExitUndetermined;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}
