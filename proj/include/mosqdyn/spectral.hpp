#pragma once

#include <complex>
#include <vector>

#include "mosqdyn/dynamics.hpp"
#include "mosqdyn/params.hpp"

namespace mosqdyn {

/// The point handed to classify_fixed_point does not satisfy W0(z) = z
/// within tolerance.
class NotAFixedPoint : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Matrix2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
};

using Complex = std::complex<double>;

/// Eigenvalues ordered by modulus descending, ties broken by real part
/// then imaginary part descending, so reports are reproducible.
struct EigenPair {
    Complex first;
    Complex second;
};

enum class Stability { Attracting, Repelling, Saddle, NonHyperbolic };

const char* to_string(Stability s);

/// The two oviposition-rate thresholds that organize the spectrum at the
/// origin:
///   t1 = mu*(1 + d0/alpha)
///   t2 = t1 + (4 - 2*(alpha + mu + d0))/alpha
/// beta < t1: extinction equilibrium attracts; t1 < beta < t2: saddle;
/// beta > t2: repelling; equality: non-hyperbolic.  t1 < t2 whenever
/// alpha + mu + d0 < 2.
struct RegimeThresholds {
    double t1 = 0.0;
    double t2 = 0.0;
};

RegimeThresholds regime_thresholds(const ModelParams& p);

/// Fixed points of W0: always the origin, plus the coexistence point
///
///   z2 = (alpha*(beta-mu)/(mu*d0) - 1,
///         (alpha*(beta-mu) - mu*d0)/(mu*(beta-mu)))
///
/// when beta > t1 (returned only when strictly inside the open quadrant).
/// Throws InvalidParams unless p.lemma1_valid.
std::vector<State2> fixed_points_w0(const ModelParams& p);

/// Jacobian of W0 at z = (x, y):
///   [ 1 - d0 - alpha/(1+x)^2   beta  ]
///   [ alpha/(1+x)^2            1-mu  ]
Matrix2 jacobian_w0(const ModelParams& p, const State2& z);

/// Roots of lambda^2 - tr(m)*lambda + det(m), sorted by modulus
/// descending.  Throws NonFiniteInput on non-finite entries.
EigenPair eigenvalues_2x2(const Matrix2& m);

struct FixedPointReport {
    State2 location;
    EigenPair eigenvalues;
    Stability stability = Stability::NonHyperbolic;
    RegimeThresholds thresholds;
};

/// Spectral classification of a fixed point z of W0.  NonHyperbolic is
/// declared when some eigenvalue modulus lies within tol of 1; otherwise
/// attracting (both moduli < 1), repelling (both > 1) or saddle.  Throws
/// NotAFixedPoint when ||W0(z) - z|| exceeds a scale-relative residual
/// bound.
FixedPointReport classify_fixed_point(const ModelParams& p, const State2& z,
                                      double tol = 1e-9);

/// Regime of the origin by pure threshold comparison of beta against t1
/// and t2 (no eigenvalue computation).  beta within boundary_tol of a
/// threshold is reported NonHyperbolic, mirroring the eigenvalue-modulus
/// tolerance of classify_fixed_point.
Stability origin_regime(const ModelParams& p, double boundary_tol = 1e-9);

} // namespace mosqdyn
