#pragma once

#include <cstddef>
#include <optional>

#include "mosqdyn/dynamics.hpp"
#include "mosqdyn/params.hpp"

namespace mosqdyn {

/// The normalizing denominator of U degenerated (possible only at the
/// origin, which is off the simplex).
class DegenerateDenominator : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iteration budget exhausted before the convergence condition was met.
class MaxIterExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coefficients of the one-dimensional reduction T on [0,1],
///
///   T(x) = (a*x^2 + b*x + beta) / (e*x^2 + (1-d0)*x + f)
///
/// with a = 1-d0-beta, b = 1-d0-alpha, e = mu-beta-d0, f = beta-mu+1, and
/// the discriminant-like combination
///   d = alpha*e^2 + (f-e)*((1-d0)*(1-mu) + alpha*e)
/// that controls where T' can vanish.  Under the valid parameter family
/// f > 0 and e + f = 1 - d0.
struct TCoefficients {
    double a = 0.0;
    double b = 0.0;
    double e = 0.0;
    double f = 0.0;
    double d = 0.0;

    static TCoefficients from(const ModelParams& p);
};

/// One step of the normalized operator U on the simplex {x + y = 1}:
///
///   x' = ((beta*y + (1-d0)*x)*(1+x) - alpha*x) / D
///   y' = (alpha*x + (1+x)*(1-mu)*y) / D
///   D  = (1+x)*((beta-mu+1)*y + (1-d0)*x)
///
/// Requires lemma1-valid parameters and |x + y - 1| <= 1e-12; the result
/// again satisfies x' + y' = 1 within 1e-12 with both components
/// nonnegative.
State2 step_u(const State2& s, const ModelParams& p);

/// The one-dimensional reduction T of U via y = 1 - x.  Maps [0,1] to
/// itself and agrees with the x-component of step_u((x, 1-x)) within
/// 1e-12.  Throws InvalidParams unless p.lemma1_valid.
double t_map(double x, const ModelParams& p);

/// Analytic derivative of T; agrees with central finite differences to
/// 1e-6 on [0,1].
double t_derivative(double x, const ModelParams& p);

/// The cubic whose unique root in [0,1] is the fixed point of T:
///   l(x) = e*x^3 + beta*x^2 + (alpha - e)*x - beta,  e = mu - beta - d0.
/// l(0) = -beta < 0 and l(1) = alpha > 0, so [0,1] always brackets.
struct Cubic {
    double c3 = 0.0, c2 = 0.0, c1 = 0.0, c0 = 0.0;

    double eval(double x) const { return ((c3 * x + c2) * x + c1) * x + c0; }
    double d1(double x) const { return (3.0 * c3 * x + 2.0 * c2) * x + c1; }
    double d2(double x) const { return 6.0 * c3 * x + 2.0 * c2; }
    double d3() const { return 6.0 * c3; }
};

Cubic t_fixed_point_cubic(const ModelParams& p);

/// Number of sign variations in (l(c), l'(c), l''(c), l'''(c)), zeros
/// skipped.  The variation-count drop between 0 and 1 bounds the number
/// of roots of l in (0,1).
int budan_fourier_variations(const Cubic& l, double c);

/// The unique fixed point of T in [0,1].  Dispatches on |e| < 1e-12 to
/// the quadratic closed form (sqrt(alpha^2 + 4*beta^2) - alpha)/(2*beta);
/// otherwise a safeguarded Newton/bisection hybrid on the bracketing
/// cubic.  Cubic residual at the result is < 1e-11.
double t_fixed_point(const ModelParams& p);

/// Closed-form (radical) evaluation of the fixed point, kept as an
/// independent cross-check of the iterative root.  The nested radicals
/// pass through complex intermediates when the cubic has three real
/// roots, and the principal branch then lands on a root outside [0,1];
/// all three cube-root branches are therefore evaluated and the one in
/// [0,1] selected.  Any residual disagreement is surfaced through the
/// fields, never patched.
struct CardanoCrossCheck {
    bool found = false;       ///< some branch landed in [0,1]
    double value = 0.0;       ///< selected branch value (real part)
    double principal_value = 0.0;  ///< literal principal-branch value
    double imag_residual = 0.0;    ///< |imag| of the selected branch
    int branch = -1;          ///< cube-root branch index; -1 = quadratic form
};

CardanoCrossCheck t_fixed_point_cardano(const ModelParams& p);

/// Multiplier T'(x*) at the fixed point; lies strictly inside (-1, 1) for
/// every lemma1-valid parameter set.
double t_fixed_point_stability(const ModelParams& p);

enum class Shape { IncreasingOnS, DecreasingOnS, DecreasingThenIncreasing };
enum class CaseTag { E_Zero, E_Equals_F, General };

const char* to_string(Shape s);
const char* to_string(CaseTag t);

/// Monotonicity structure of T on [0,1].  x_min is present exactly for
/// the decreasing-then-increasing shape and satisfies T'(x_min) = 0
/// within 1e-8.
struct MonotonicityProfile {
    Shape shape = Shape::IncreasingOnS;
    std::optional<double> x_min;
    CaseTag case_tag = CaseTag::General;
    /// Parameters fell inside the case-dispatch tolerance without being
    /// exactly on the special case.
    bool case_boundary = false;
    /// Shape was decided by the derivative-sign grid because the
    /// closed-form preconditions did not apply.
    bool grid_decided = false;
};

/// Case dispatch: |e| < 1e-12 selects E_Zero with
/// x_min = sqrt(alpha/(1-mu)) - 1; |e-f| < 1e-12 selects E_Equals_F with
/// x_min = (alpha - 2(1-mu))/(alpha + 2(1-mu)); otherwise the general
/// closed form x_min = (sqrt(d) - f*sqrt(alpha))/(e*sqrt(alpha) - sqrt(d))
/// when its preconditions hold, else a 1e3-point derivative-sign grid.
MonotonicityProfile t_monotonicity_profile(const ModelParams& p);

/// Certificate that T has no 2-cycle: composing T with itself and
/// removing fixed points reduces to A*x^2 + B*x + C = 0 with
///   A = (1-beta)*(beta-2) + (beta-mu+1)*(beta-mu) + d0*(5-2*beta-mu-2*d0)
///   B = 2*(1-d0)*(alpha+d0+mu-2) - alpha*beta
///   C = (beta-mu+1)*(alpha+d0+mu-2) - beta*(2-mu-d0)
/// and the quadratic stays negative on [0,1] for every valid parameter
/// set, so the equation has no solution there.  Absence of 2-cycles for a
/// continuous interval map excludes all periods >= 2 (Sharkovskii order).
struct Period2Certificate {
    double A = 0.0, B = 0.0, C = 0.0;
    double max_quadratic_on_unit_interval = 0.0;
    bool conclusion = false;  ///< no period-2 point exists in [0,1]
};

Period2Certificate period2_certificate(const ModelParams& p);

/// Iterates T from x0 until both the successive difference is < tol and
/// the iterate is within 10*tol of the fixed point, then returns the
/// limit.  Throws MaxIterExceeded when the budget runs out first (signals
/// a multiplier near the unit boundary).
double omega_limit(double x0, const ModelParams& p, double tol = 1e-10,
                   std::size_t max_iter = 100000);

} // namespace mosqdyn
