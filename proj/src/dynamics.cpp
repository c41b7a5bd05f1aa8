#include "mosqdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mosqdyn {

namespace {

// Shared step kernel so step_w and step_w0 agree bit for bit when d1 = 0.
// The survival bracket (1 - d0 - d1*x) - alpha/(1+x) is nonnegative in
// exact arithmetic for lemma1-valid parameters and x >= 0, but can round
// one ulp below zero at the alpha + d0 = 1 boundary; the clamp keeps the
// quadrant invariant in floating point as well.
State2 step_kernel(const State2& s, const ModelParams& p) {
    const double one_plus_x = 1.0 + s.x;
    const double emergence = p.alpha * s.x / one_plus_x;
    double survive = (1.0 - p.d0 - p.d1 * s.x) - p.alpha / one_plus_x;
    if (p.lemma1_valid && survive < 0.0 && survive > -1e-14) survive = 0.0;
    State2 out;
    out.x = p.beta * s.y + s.x * survive;
    out.y = emergence + (1.0 - p.mu) * s.y;
    return out;
}

void check_state_finite(const State2& s) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y))
        throw NonFiniteInput("state coordinate is not finite");
}

} // namespace

double max_norm_distance(const State2& a, const State2& b) {
    return std::max(std::fabs(a.x - b.x), std::fabs(a.y - b.y));
}

StepResult step_w(const State2& s, const ModelParams& p) {
    check_state_finite(s);
    if (s.x == -1.0)
        throw std::invalid_argument("step_w undefined at x = -1");
    StepResult r;
    r.value = step_kernel(s, p);
    r.left_quadrant = !r.value.in_quadrant();
    return r;
}

State2 step_w0(const State2& s, const ModelParams& p) {
    if (!p.lemma1_valid)
        throw InvalidParams("step_w0 requires lemma1-valid parameters");
    check_state_finite(s);
    if (!s.in_quadrant())
        throw std::invalid_argument(
            "step_w0 requires a state in the nonnegative quadrant");
    return step_kernel(s, p);
}

Trajectory iterate_w0(const State2& s0, const ModelParams& p, std::size_t n,
                      std::optional<double> stop_tol) {
    IterateOptions opts;
    opts.max_steps = n;
    opts.stop_tol = stop_tol;
    return iterate_w0(s0, p, opts);
}

Trajectory iterate_w0(const State2& s0, const ModelParams& p,
                      const IterateOptions& opts) {
    if (!p.lemma1_valid)
        throw InvalidParams("iterate_w0 requires lemma1-valid parameters");
    if (opts.max_steps < 1)
        throw std::invalid_argument("iterate_w0 needs at least one step");

    Trajectory t;
    t.params = p;
    if (opts.ring_capacity == 0)
        t.points.reserve(std::min<std::size_t>(opts.max_steps + 1, 1u << 20));
    t.points.push_back(s0);

    State2 cur = s0;
    for (std::size_t step = 1; step <= opts.max_steps; ++step) {
        const State2 next = step_w0(cur, p);
        if (opts.stop_tol && max_norm_distance(next, cur) < *opts.stop_tol) {
            // The new point is recorded as the limit, not appended, so a
            // start that is already a fixed point yields a single row.
            t.converged = Converged{next, *opts.stop_tol};
            break;
        }
        if (opts.ring_capacity > 0 && t.points.size() == opts.ring_capacity) {
            t.points.erase(t.points.begin());
            ++t.first_index;
        }
        t.points.push_back(next);
        cur = next;
    }
    return t;
}

} // namespace mosqdyn
