#include "mosqdyn/params.hpp"

#include <cmath>
#include <sstream>

namespace mosqdyn {

ModelParams validate_params(double alpha, double beta, double mu, double d0,
                            double d1) {
    const double raw[] = {alpha, beta, mu, d0, d1};
    const char* names[] = {"alpha", "beta", "mu", "d0", "d1"};
    for (int i = 0; i < 5; ++i) {
        if (!std::isfinite(raw[i])) {
            std::ostringstream os;
            os << names[i] << " is not finite";
            throw NonFiniteInput(os.str());
        }
    }
    if (alpha <= 0.0) throw SignConstraintViolated("alpha must be positive");
    if (beta <= 0.0) throw SignConstraintViolated("beta must be positive");
    if (mu <= 0.0) throw SignConstraintViolated("mu must be positive");
    if (d0 < 0.0) throw SignConstraintViolated("d0 must be nonnegative");
    if (d1 < 0.0) throw SignConstraintViolated("d1 must be nonnegative");

    ModelParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.mu = mu;
    p.d0 = d0;
    p.d1 = d1;
    p.lemma1_valid =
        mu <= 1.0 && d0 > 0.0 && alpha + d0 <= 1.0 && d1 == 0.0;
    return p;
}

std::optional<std::string> lemma1_violation(const ModelParams& p) {
    if (p.mu > 1.0) return "mu must satisfy 0 < mu <= 1";
    if (p.d0 <= 0.0) return "d0 must be strictly positive";
    if (p.alpha + p.d0 > 1.0) return "alpha + d0 must not exceed 1";
    if (p.d1 != 0.0) return "d1 must be zero";
    return std::nullopt;
}

} // namespace mosqdyn
