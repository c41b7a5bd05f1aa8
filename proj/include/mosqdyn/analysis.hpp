#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mosqdyn/dynamics.hpp"
#include "mosqdyn/params.hpp"
#include "mosqdyn/spectral.hpp"

namespace mosqdyn {

/// Eventual orbit bounds implied by the rates:
///   x(n) < alpha*beta/(mu*d0),  y(n) < alpha/mu   eventually,
/// and both regions are absorbing.
struct OrbitBounds {
    double x_bound = 0.0;
    double y_bound = 0.0;
};

OrbitBounds orbit_bounds(const ModelParams& p);

/// First stored index after which both coordinates stay strictly below
/// their bounds for the remainder of the orbit, or nullopt when the
/// horizon is too short.  Also verifies absorption (once below a bound,
/// never above it again); a violation would contradict the map algebra
/// and throws std::logic_error.
std::optional<std::size_t> verify_eventual_bounds(const Trajectory& traj);

/// First stored index from which both coordinate sequences are
/// non-increasing to the end of the orbit; also recorded on the
/// trajectory.  Requires beta < t1 (the monotone-tail regime); refuses
/// otherwise with InvalidParams.  Also checks that a joint strict
/// decrease propagates to the next step.  Returns nullopt when no tail
/// exists within the horizon.
std::optional<std::size_t> monotone_tail(Trajectory& traj);

/// Pattern checks on a stored orbit in the beta < t1 regime.  Each field
/// is the first offending index, or nullopt when the property holds.
struct OrbitPropertyReport {
    /// Both coordinates strictly increased in one step.
    std::optional<std::size_t> joint_increase_at;
    /// Joint strict decrease at k that failed to propagate to k+1.
    std::optional<std::size_t> decrease_propagation_break_at;
    /// y(n) exceeded the geometric decay envelope
    /// alpha/mu + (1-mu)^n*(y(0) - alpha/mu).
    std::optional<std::size_t> y_envelope_violation_at;
    /// x(n) exceeded its envelope anchored at the first index with
    /// y < alpha/mu (the x-recursion needs the adult bound to hold).
    std::optional<std::size_t> x_envelope_violation_at;
    std::optional<std::size_t> absorption_violation_at;
    /// The excluded oscillation behaviour: steps with one coordinate
    /// strictly rising and the other strictly falling persisted to the
    /// end of the stored orbit (transient occurrences are normal; the
    /// pattern may not last).  Start of the offending suffix.
    std::optional<std::size_t> oscillation_pattern_at;

    bool all_ok() const {
        return !joint_increase_at && !decrease_propagation_break_at &&
               !y_envelope_violation_at && !x_envelope_violation_at &&
               !absorption_violation_at && !oscillation_pattern_at;
    }
};

OrbitPropertyReport check_orbit_properties(const Trajectory& traj);

enum class Verdict { ConvergedToOrigin, ConvergedToInterior, Undetermined };

const char* to_string(Verdict v);

struct ConvergenceReport {
    ModelParams params;
    State2 start;
    Verdict verdict = Verdict::Undetermined;
    /// First index after which both orbit bounds hold (witnessed by the
    /// stored trajectory).
    std::optional<std::size_t> bound_entry_index;
    std::optional<std::size_t> monotone_tail_index;
    std::size_t iterations_used = 0;
    State2 final_state;
    double tol = 0.0;
};

/// Drives the orbit of s0 under W0 and reports convergence to the origin.
/// Requires lemma1-valid parameters with beta < t1; an exhausted budget
/// yields Undetermined, never a disproof.  Convergence means both the
/// successive difference and the distance to the origin fell below tol.
ConvergenceReport converges_to_origin(const ModelParams& p, const State2& s0,
                                      double tol = 1e-10,
                                      std::size_t max_iter = 100000);

/// Cartesian parameter grid for regime sweeps (d1 = 0 cells).
struct SweepGrid {
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> mu;
    std::vector<double> d0;

    std::size_t size() const {
        return alpha.size() * beta.size() * mu.size() * d0.size();
    }
};

enum class SweepVerdict {
    ConvergedToOrigin,
    ConvergedToInterior,
    Undetermined,
    Exploratory,
    Error
};

const char* to_string(SweepVerdict v);

/// One grid cell.  Cells with beta >= t1 are outside the proven regime
/// and carry the Exploratory verdict; what the orbit actually did is kept
/// as an observation in `empirical` / `limit`, never as a claim.
struct SweepRow {
    double alpha = 0.0, beta = 0.0, mu = 0.0, d0 = 0.0;
    std::optional<Stability> regime;
    SweepVerdict verdict = SweepVerdict::Error;
    std::size_t iterations = 0;
    std::optional<Verdict> empirical;
    std::optional<State2> limit;
    std::optional<double> limit_residual;
    std::optional<std::string> error;
};

struct SweepOptions {
    std::size_t max_iter = 100000;
    double tol = 1e-10;
    /// 0 picks the hardware concurrency; cells run independently and the
    /// row order is fixed by grid coordinates regardless of threading.
    unsigned threads = 0;
};

std::vector<SweepRow> sweep_regimes(const SweepGrid& grid, const State2& s0,
                                    const SweepOptions& opts = {});

} // namespace mosqdyn
