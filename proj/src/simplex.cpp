#include "mosqdyn/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace mosqdyn {

namespace {

constexpr double kDegenerateE = 1e-12;   // |e| below this: quadratic branch
constexpr double kCaseTol = 1e-12;       // case dispatch for the profile

void require_valid(const ModelParams& p, const char* who) {
    if (!p.lemma1_valid) {
        std::string msg(who);
        throw InvalidParams(msg + " requires lemma1-valid parameters");
    }
}

} // namespace

TCoefficients TCoefficients::from(const ModelParams& p) {
    TCoefficients c;
    c.a = 1.0 - p.d0 - p.beta;
    c.b = 1.0 - p.d0 - p.alpha;
    c.e = p.mu - p.beta - p.d0;
    // Written as beta + (1 - mu) so that f >= beta holds in floating
    // point too; T(0) = beta/f then cannot exceed 1 even at mu = 1.
    c.f = p.beta + (1.0 - p.mu);
    c.d = p.alpha * c.e * c.e +
          (c.f - c.e) * ((1.0 - p.d0) * (1.0 - p.mu) + p.alpha * c.e);
    return c;
}

State2 step_u(const State2& s, const ModelParams& p) {
    require_valid(p, "step_u");
    if (!std::isfinite(s.x) || !std::isfinite(s.y))
        throw NonFiniteInput("state coordinate is not finite");
    if (std::fabs(s.x + s.y - 1.0) > 1e-12)
        throw std::invalid_argument("step_u requires x + y = 1 within 1e-12");

    const double one_plus_x = 1.0 + s.x;
    const double den =
        one_plus_x * ((p.beta - p.mu + 1.0) * s.y + (1.0 - p.d0) * s.x);
    if (!(den > 1e-300))
        throw DegenerateDenominator("normalizing denominator degenerated");

    State2 out;
    out.x = ((p.beta * s.y + (1.0 - p.d0) * s.x) * one_plus_x -
             p.alpha * s.x) /
            den;
    out.y = (p.alpha * s.x + one_plus_x * (1.0 - p.mu) * s.y) / den;
    return out;
}

double t_map(double x, const ModelParams& p) {
    require_valid(p, "t_map");
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("t_map requires x in [0,1]");
    const TCoefficients c = TCoefficients::from(p);
    const double num = (c.a * x + c.b) * x + p.beta;
    const double den = (c.e * x + (1.0 - p.d0)) * x + c.f;
    // The exact map sends [0,1] into itself; the clamp only absorbs
    // one-ulp rounding overshoot at the range boundary.
    return std::clamp(num / den, 0.0, 1.0);
}

double t_derivative(double x, const ModelParams& p) {
    require_valid(p, "t_derivative");
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("t_derivative requires x in [0,1]");
    const TCoefficients c = TCoefficients::from(p);
    const double h1 = (c.a * x + c.b) * x + p.beta;
    const double h2 = (c.e * x + (1.0 - p.d0)) * x + c.f;
    const double dh1 = 2.0 * c.a * x + c.b;
    const double dh2 = 2.0 * c.e * x + (1.0 - p.d0);
    return (dh1 * h2 - h1 * dh2) / (h2 * h2);
}

Cubic t_fixed_point_cubic(const ModelParams& p) {
    const TCoefficients c = TCoefficients::from(p);
    Cubic l;
    l.c3 = c.e;
    l.c2 = p.beta;
    l.c1 = p.alpha - c.e;  // = beta - mu + d0 + alpha
    l.c0 = -p.beta;
    return l;
}

int budan_fourier_variations(const Cubic& l, double c) {
    const double seq[4] = {l.eval(c), l.d1(c), l.d2(c), l.d3()};
    int variations = 0;
    int prev_sign = 0;
    for (double v : seq) {
        const int s = (v > 0.0) - (v < 0.0);
        if (s == 0) continue;  // zeros are skipped
        if (prev_sign != 0 && s != prev_sign) ++variations;
        prev_sign = s;
    }
    return variations;
}

namespace {

// Unique root of the bracketing cubic in [0,1]: Newton iteration
// safeguarded by the sign-change interval, bisection when a step leaves
// the bracket.  l(0) = -beta < 0 < alpha = l(1).
double cubic_root_on_unit_interval(const Cubic& l) {
    double lo = 0.0, hi = 1.0;
    double x = 0.5;
    for (int it = 0; it < 200; ++it) {
        const double fx = l.eval(x);
        if (fx == 0.0) return x;
        if (fx < 0.0)
            lo = x;
        else
            hi = x;
        double next;
        const double dfx = l.d1(x);
        if (dfx != 0.0) {
            next = x - fx / dfx;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        } else {
            next = 0.5 * (lo + hi);
        }
        if (std::fabs(next - x) < 1e-16 || hi - lo < 4e-17) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

} // namespace

double t_fixed_point(const ModelParams& p) {
    require_valid(p, "t_fixed_point");
    const TCoefficients c = TCoefficients::from(p);
    if (std::fabs(c.e) < kDegenerateE) {
        // Quadratic branch beta*x^2 + alpha*x - beta = 0, positive root.
        return (std::sqrt(p.alpha * p.alpha + 4.0 * p.beta * p.beta) -
                p.alpha) /
               (2.0 * p.beta);
    }
    return cubic_root_on_unit_interval(t_fixed_point_cubic(p));
}

CardanoCrossCheck t_fixed_point_cardano(const ModelParams& p) {
    require_valid(p, "t_fixed_point_cardano");
    const TCoefficients c = TCoefficients::from(p);
    CardanoCrossCheck r;

    if (std::fabs(c.e) < kDegenerateE) {
        r.value = (std::sqrt(p.alpha * p.alpha + 4.0 * p.beta * p.beta) -
                   p.alpha) /
                  (2.0 * p.beta);
        r.principal_value = r.value;
        r.found = true;
        r.branch = -1;
        return r;
    }

    using C = std::complex<double>;
    const double e = c.e, beta = p.beta, alpha = p.alpha;
    const double R = 9.0 * beta * e * (alpha + 2.0 * e) - 2.0 * beta * beta * beta;
    const double inner = -beta * beta + 3.0 * e * (alpha - e);
    const double D = 4.0 * inner * inner * inner + R * R;
    const C sq = std::sqrt(C(D, 0.0));
    const C w = C(R, 0.0) + sq;
    if (std::abs(w) < 1e-300) return r;  // degenerate radicand, not found

    const C base = std::pow(2.0 / w, 1.0 / 3.0);
    const double vertex_shift = beta * beta - 3.0 * (alpha - e) * e;

    constexpr double kTwoPiOver3 = 2.0943951023931953;
    for (int k = 0; k < 3; ++k) {
        const C rot = std::polar(1.0, kTwoPiOver3 * k);
        const C sigma = base * rot;
        const C x = (sigma * vertex_shift + 1.0 / sigma - beta) / (3.0 * e);
        if (k == 0) r.principal_value = x.real();
        const double imag = std::fabs(x.imag());
        const bool in_range = x.real() > -1e-9 && x.real() < 1.0 + 1e-9 &&
                              imag < 1e-9 * (1.0 + std::fabs(x.real()));
        if (in_range && (!r.found || imag < r.imag_residual)) {
            r.found = true;
            r.value = x.real();
            r.imag_residual = imag;
            r.branch = k;
        }
    }
    return r;
}

double t_fixed_point_stability(const ModelParams& p) {
    return t_derivative(t_fixed_point(p), p);
}

const char* to_string(Shape s) {
    switch (s) {
        case Shape::IncreasingOnS: return "IncreasingOnS";
        case Shape::DecreasingOnS: return "DecreasingOnS";
        case Shape::DecreasingThenIncreasing: return "DecreasingThenIncreasing";
    }
    return "?";
}

const char* to_string(CaseTag t) {
    switch (t) {
        case CaseTag::E_Zero: return "E_Zero";
        case CaseTag::E_Equals_F: return "E_Equals_F";
        case CaseTag::General: return "General";
    }
    return "?";
}

namespace {

// Sharpens a minimum estimate by bisecting T' in a bracket grown around
// the seed.  The radical closed form for the general case cancels badly
// when e and f nearly coincide (T' carries a 1/(f-e) factor there), while
// T' itself evaluates to full precision, so the refined zero is reliable
// in exactly the cases where the formula is not.
double refine_derivative_zero(const ModelParams& p, double seed) {
    double lo = seed, hi = seed;
    double step = 1e-9;
    for (int it = 0; it < 60 && t_derivative(lo, p) >= 0.0; ++it) {
        lo = std::max(0.0, lo - step);
        step *= 2.0;
        if (lo == 0.0) break;
    }
    step = 1e-9;
    for (int it = 0; it < 60 && t_derivative(hi, p) <= 0.0; ++it) {
        hi = std::min(1.0, hi + step);
        step *= 2.0;
        if (hi == 1.0) break;
    }
    if (!(t_derivative(lo, p) < 0.0 && t_derivative(hi, p) > 0.0)) return seed;
    for (int it = 0; it < 100 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (t_derivative(mid, p) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Derivative-sign scan used when the closed forms do not apply.  Looks
// for a single negative-to-positive transition; the minimum is then
// pinned by bisecting T' between the bracketing grid points.
MonotonicityProfile profile_from_grid(const ModelParams& p,
                                      MonotonicityProfile base) {
    constexpr int kGrid = 1000;
    base.grid_decided = true;

    int first_pos = -1, last_neg = -1;
    bool any_neg = false, any_pos = false;
    double prev_x = 0.0;
    int prev_sign = 0;
    double bracket_lo = 0.0, bracket_hi = 1.0;
    bool change_found = false;

    for (int i = 0; i <= kGrid; ++i) {
        const double x = static_cast<double>(i) / kGrid;
        const double dv = t_derivative(x, p);
        // values at rounding level count as zero, not as a sign
        const int s = std::fabs(dv) <= 1e-13 ? 0 : (dv > 0.0 ? 1 : -1);
        if (s < 0) {
            any_neg = true;
            last_neg = i;
        }
        if (s > 0) {
            any_pos = true;
            if (first_pos < 0) first_pos = i;
        }
        if (prev_sign < 0 && s > 0) {
            change_found = true;
            bracket_lo = prev_x;
            bracket_hi = x;
        }
        if (s != 0) {
            prev_sign = s;
            prev_x = x;
        }
    }

    if (!any_neg) {
        base.shape = Shape::IncreasingOnS;
        return base;
    }
    if (!any_pos) {
        base.shape = Shape::DecreasingOnS;
        return base;
    }
    if (!change_found || first_pos < last_neg)
        throw std::logic_error(
            "derivative sign pattern is not decreasing-then-increasing");

    double lo = bracket_lo, hi = bracket_hi;
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (t_derivative(mid, p) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    base.shape = Shape::DecreasingThenIncreasing;
    base.x_min = 0.5 * (lo + hi);
    return base;
}

} // namespace

MonotonicityProfile t_monotonicity_profile(const ModelParams& p) {
    require_valid(p, "t_monotonicity_profile");
    const TCoefficients c = TCoefficients::from(p);

    MonotonicityProfile prof;
    prof.case_boundary =
        (c.e != 0.0 && std::fabs(c.e) < kCaseTol) ||
        (c.e != c.f && std::fabs(c.e - c.f) < kCaseTol);

    if (std::fabs(c.e) < kCaseTol) {
        // T(x) = ((1-mu)x + beta - alpha + alpha/(1+x)) / (1-d0);
        // T'(x) = 0 at x = sqrt(alpha/(1-mu)) - 1.
        prof.case_tag = CaseTag::E_Zero;
        const double one_minus_mu = 1.0 - p.mu;
        if (p.alpha <= one_minus_mu) {
            prof.shape = Shape::IncreasingOnS;
        } else if (p.alpha >= 4.0 * one_minus_mu) {
            prof.shape = Shape::DecreasingOnS;
        } else {
            prof.shape = Shape::DecreasingThenIncreasing;
            prof.x_min = std::sqrt(p.alpha / one_minus_mu) - 1.0;
        }
        return prof;
    }

    if (std::fabs(c.e - c.f) < kCaseTol) {
        // T(x) = (a - (2(1-mu)+alpha)/(1+x) + alpha/(1+x)^2) / e, minimum
        // at x = (alpha - 2(1-mu))/(alpha + 2(1-mu)).
        prof.case_tag = CaseTag::E_Equals_F;
        const double two_one_minus_mu = 2.0 * (1.0 - p.mu);
        const double x_min =
            (p.alpha - two_one_minus_mu) / (p.alpha + two_one_minus_mu);
        if (x_min <= 0.0) {
            prof.shape = Shape::IncreasingOnS;
        } else if (x_min >= 1.0) {
            prof.shape = Shape::DecreasingOnS;
        } else {
            prof.shape = Shape::DecreasingThenIncreasing;
            prof.x_min = x_min;
        }
        return prof;
    }

    prof.case_tag = CaseTag::General;
    const double lower = (1.0 - p.d0) * (1.0 - p.mu) / c.f;
    const bool window =
        c.d > 0.0 &&
        ((c.f > c.e && p.alpha > lower &&
          p.alpha < 4.0 * (1.0 - p.d0) * (1.0 - p.mu) / (c.f - c.e)) ||
         (c.e > c.f && p.alpha > lower));
    if (window) {
        const double sqrt_d = std::sqrt(c.d);
        const double sqrt_a = std::sqrt(p.alpha);
        const double denom = c.e * sqrt_a - sqrt_d;
        if (denom != 0.0) {
            const double x_min = (sqrt_d - c.f * sqrt_a) / denom;
            if (x_min > 0.0 && x_min < 1.0) {
                prof.shape = Shape::DecreasingThenIncreasing;
                prof.x_min = refine_derivative_zero(p, x_min);
                return prof;
            }
        }
    }
    // Outside the closed-form window the map is monotone; the direction
    // is read off the derivative-sign grid.
    return profile_from_grid(p, prof);
}

Period2Certificate period2_certificate(const ModelParams& p) {
    require_valid(p, "period2_certificate");
    const double alpha = p.alpha, beta = p.beta, mu = p.mu, d0 = p.d0;

    Period2Certificate cert;
    cert.A = (1.0 - beta) * (beta - 2.0) + (beta - mu + 1.0) * (beta - mu) +
             d0 * (5.0 - 2.0 * beta - mu - 2.0 * d0);
    cert.B = 2.0 * (1.0 - d0) * (alpha + d0 + mu - 2.0) - alpha * beta;
    cert.C = (beta - mu + 1.0) * (alpha + d0 + mu - 2.0) -
             beta * (2.0 - mu - d0);

    // Exact maximum of A*x^2 + B*x + C on [0,1] from vertex/endpoints.
    double m = std::max(cert.C, cert.A + cert.B + cert.C);
    if (cert.A < 0.0) {
        const double xv = -cert.B / (2.0 * cert.A);
        if (xv > 0.0 && xv < 1.0)
            m = std::max(m, cert.C - cert.B * cert.B / (4.0 * cert.A));
    }
    cert.max_quadratic_on_unit_interval = m;
    cert.conclusion = m < 0.0;
    return cert;
}

double omega_limit(double x0, const ModelParams& p, double tol,
                   std::size_t max_iter) {
    require_valid(p, "omega_limit");
    if (!(tol > 0.0)) throw std::invalid_argument("omega_limit needs tol > 0");
    const double x_star = t_fixed_point(p);

    double x = x0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        const double next = t_map(x, p);
        // Converged once the step is below tol *and* the iterate sits on
        // the fixed point within 10*tol; the joint condition keeps slow
        // transients from being declared limits.
        if (std::fabs(next - x) < tol && std::fabs(next - x_star) < 10.0 * tol)
            return next;
        x = next;
    }
    throw MaxIterExceeded("omega_limit budget exhausted before convergence");
}

} // namespace mosqdyn
