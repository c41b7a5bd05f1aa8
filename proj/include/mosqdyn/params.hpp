#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace mosqdyn {

/// A raw input was NaN or infinite.
class NonFiniteInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A basic sign constraint of the model definition was violated
/// (alpha > 0, beta > 0, mu > 0, d0 >= 0, d1 >= 0).
class SignConstraintViolated : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation that needs quadrant-invariant parameters (lemma1_valid)
/// was called with parameters outside that family.
class InvalidParams : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The five rates of the stage-structured mosquito map
///
///   x' = beta*y - alpha*x/(1+x) - (d0 + d1*x)*x + x
///   y' = alpha*x/(1+x) - mu*y + y
///
/// where x is the grouped aquatic (larvae) density and y the adult
/// density.  alpha is the maximum emergence rate, beta the oviposition
/// rate, mu the adult death rate, and d0 + d1*x the larvae death rate.
struct ModelParams {
    double alpha = 0.0;
    double beta = 0.0;
    double mu = 0.0;
    double d0 = 0.0;
    double d1 = 0.0;

    /// True iff the parameters keep the nonnegative quadrant invariant:
    /// 0 < mu <= 1, d0 > 0, alpha + d0 <= 1, d1 = 0.  All analytical
    /// operations (fixed points, normalized map, convergence machinery)
    /// require this flag.
    bool lemma1_valid = false;
};

/// Checks raw rates against the model definition and computes the
/// lemma1_valid flag.  Throws NonFiniteInput or SignConstraintViolated
/// when the inputs are outside the definition of the map itself.
ModelParams validate_params(double alpha, double beta, double mu, double d0,
                            double d1);

/// Names the first violated quadrant-invariance condition, or nullopt if
/// all of them hold.  Used for diagnostics (CLI error messages).
std::optional<std::string> lemma1_violation(const ModelParams& p);

} // namespace mosqdyn
