#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mosqdyn/params.hpp"

namespace mosqdyn {

/// A point of the two-stage state space: larvae density x, adult density y.
/// Model states live in the nonnegative quadrant; the struct itself does
/// not enforce that because raw-operator sweeps need to carry points that
/// just left it.
struct State2 {
    double x = 0.0;
    double y = 0.0;

    bool in_quadrant() const { return x >= 0.0 && y >= 0.0; }
};

/// Max-norm distance between two states.
double max_norm_distance(const State2& a, const State2& b);

/// Result of one step of the raw operator W.  The raw map is not
/// quadrant-invariant for arbitrary parameters, and callers charting the
/// unstudied region need the value even when it leaves the quadrant, so
/// departures are reported through the flag instead of an exception.
struct StepResult {
    State2 value;
    bool left_quadrant = false;
};

/// One step of the full map W, including the density-dependent death term
/// d1*x^2.  Requires basic sign-valid parameters and s.x != -1 (automatic
/// for quadrant states).
StepResult step_w(const State2& s, const ModelParams& p);

/// One step of W0, the d1 = 0 map
///
///   x' = beta*y - (alpha/(1+x) + d0 - 1)*x
///   y' = alpha*x/(1+x) + (1-mu)*y
///
/// for lemma1-valid parameters and quadrant states.  The result stays in
/// the quadrant and is bit-identical to step_w(s, p).value.
State2 step_w0(const State2& s, const ModelParams& p);

/// Early-stop record of an orbit iteration.
struct Converged {
    State2 limit;  ///< next iterate at the moment of detection
    double tol;    ///< max-norm successive-difference threshold used
};

struct IterateOptions {
    std::size_t max_steps = 100000;
    /// Stop early once successive points differ by less than this in
    /// max-norm.
    std::optional<double> stop_tol;
    /// 0 stores the full orbit; a positive value keeps only the trailing
    /// window of that many points (memory-bounded very long runs).
    std::size_t ring_capacity = 0;
};

/// A stored orbit of W0.  points[k] is iterate number first_index + k and
/// points[k+1] = W0(points[k]) for every stored k.
struct Trajectory {
    std::vector<State2> points;
    ModelParams params;
    /// Set when the iteration stopped early; the final stored point lies
    /// within converged->tol of converged->limit.
    std::optional<Converged> converged;
    /// Filled by monotone_tail().
    std::optional<std::size_t> monotone_tail_start;
    std::size_t first_index = 0;

    std::size_t last_index() const { return first_index + points.size() - 1; }
};

/// Iterates W0 for up to n steps from s0 (n >= 1).  Throws InvalidParams
/// unless p.lemma1_valid.
Trajectory iterate_w0(const State2& s0, const ModelParams& p, std::size_t n,
                      std::optional<double> stop_tol = std::nullopt);
Trajectory iterate_w0(const State2& s0, const ModelParams& p,
                      const IterateOptions& opts);

} // namespace mosqdyn
