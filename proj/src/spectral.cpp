#include "mosqdyn/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace mosqdyn {

const char* to_string(Stability s) {
    switch (s) {
        case Stability::Attracting: return "Attracting";
        case Stability::Repelling: return "Repelling";
        case Stability::Saddle: return "Saddle";
        case Stability::NonHyperbolic: return "NonHyperbolic";
    }
    return "?";
}

RegimeThresholds regime_thresholds(const ModelParams& p) {
    RegimeThresholds t;
    t.t1 = p.mu * (1.0 + p.d0 / p.alpha);
    const double alpha_star = (4.0 - 2.0 * (p.alpha + p.mu + p.d0)) / p.alpha;
    t.t2 = t.t1 + alpha_star;
    return t;
}

std::vector<State2> fixed_points_w0(const ModelParams& p) {
    if (!p.lemma1_valid)
        throw InvalidParams("fixed_points_w0 requires lemma1-valid parameters");
    std::vector<State2> out;
    out.push_back(State2{0.0, 0.0});

    const double t1 = regime_thresholds(p).t1;
    if (p.beta > t1) {
        const double x2 = p.alpha * (p.beta - p.mu) / (p.mu * p.d0) - 1.0;
        const double y2 = (p.alpha * (p.beta - p.mu) - p.mu * p.d0) /
                          (p.mu * (p.beta - p.mu));
        // Keep the coexistence point only strictly inside the open
        // quadrant; at beta = t1 it collides with the origin.
        if (x2 > 0.0) out.push_back(State2{x2, y2});
    }
    return out;
}

Matrix2 jacobian_w0(const ModelParams& p, const State2& z) {
    if (z.x < 0.0)
        throw std::invalid_argument("jacobian_w0 requires x >= 0");
    const double s = 1.0 + z.x;
    const double emergence_slope = p.alpha / (s * s);
    Matrix2 j;
    j.a11 = 1.0 - p.d0 - emergence_slope;
    j.a12 = p.beta;
    j.a21 = emergence_slope;
    j.a22 = 1.0 - p.mu;
    return j;
}

EigenPair eigenvalues_2x2(const Matrix2& m) {
    if (!std::isfinite(m.a11) || !std::isfinite(m.a12) ||
        !std::isfinite(m.a21) || !std::isfinite(m.a22))
        throw NonFiniteInput("matrix entry is not finite");

    const double tr = m.trace();
    const double det = m.det();
    const double disc = tr * tr - 4.0 * det;

    Complex l1, l2;
    if (disc >= 0.0) {
        // Root of larger magnitude first via the cancellation-free form,
        // the other from the product.
        const double root = std::sqrt(disc);
        const double q = (tr >= 0.0) ? 0.5 * (tr + root) : 0.5 * (tr - root);
        l1 = Complex(q, 0.0);
        l2 = Complex(q != 0.0 ? det / q : 0.0, 0.0);
    } else {
        const double re = 0.5 * tr;
        const double im = 0.5 * std::sqrt(-disc);
        l1 = Complex(re, im);
        l2 = Complex(re, -im);
    }

    auto precedes = [](const Complex& a, const Complex& b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma > mb;
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    };
    if (precedes(l2, l1)) std::swap(l1, l2);
    return EigenPair{l1, l2};
}

FixedPointReport classify_fixed_point(const ModelParams& p, const State2& z,
                                      double tol) {
    const State2 image = step_w0(z, p);
    const double scale = 1.0 + std::max(std::fabs(z.x), std::fabs(z.y));
    if (max_norm_distance(image, z) > 1e-8 * scale)
        throw NotAFixedPoint("point does not satisfy W0(z) = z within tolerance");

    FixedPointReport r;
    r.location = z;
    r.eigenvalues = eigenvalues_2x2(jacobian_w0(p, z));
    r.thresholds = regime_thresholds(p);

    const double m1 = std::abs(r.eigenvalues.first);
    const double m2 = std::abs(r.eigenvalues.second);
    if (std::fabs(m1 - 1.0) < tol || std::fabs(m2 - 1.0) < tol)
        r.stability = Stability::NonHyperbolic;
    else if (m1 < 1.0 && m2 < 1.0)
        r.stability = Stability::Attracting;
    else if (m1 > 1.0 && m2 > 1.0)
        r.stability = Stability::Repelling;
    else
        r.stability = Stability::Saddle;
    return r;
}

Stability origin_regime(const ModelParams& p, double boundary_tol) {
    if (!p.lemma1_valid)
        throw InvalidParams("origin_regime requires lemma1-valid parameters");
    const RegimeThresholds t = regime_thresholds(p);
    if (std::fabs(p.beta - t.t1) < boundary_tol ||
        std::fabs(p.beta - t.t2) < boundary_tol)
        return Stability::NonHyperbolic;
    if (p.beta < t.t1) return Stability::Attracting;
    if (p.beta > t.t2) return Stability::Repelling;
    return Stability::Saddle;
}

} // namespace mosqdyn
