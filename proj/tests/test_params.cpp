#include <doctest.h>

#include <cmath>
#include <limits>

#include "mosqdyn/params.hpp"

using namespace mosqdyn;

TEST_CASE("validate_params computes the invariance flag") {
    CHECK(validate_params(0.8, 0.9, 0.8, 0.2, 0.0).lemma1_valid);
    // alpha + d0 = 1.1 > 1
    CHECK_FALSE(validate_params(0.9, 0.5, 0.5, 0.2, 0.0).lemma1_valid);
    // d1 != 0
    CHECK_FALSE(validate_params(0.5, 0.8, 0.5, 0.1, 0.3).lemma1_valid);
    // d0 = 0 is outside the invariant family even though the raw map
    // accepts it
    CHECK_FALSE(validate_params(0.5, 0.8, 0.5, 0.0, 0.0).lemma1_valid);
    // mu > 1
    CHECK_FALSE(validate_params(0.5, 0.8, 1.2, 0.1, 0.0).lemma1_valid);
    // boundary alpha + d0 = 1 is allowed
    CHECK(validate_params(0.8, 0.9, 1.0, 0.2, 0.0).lemma1_valid);
}

TEST_CASE("validate_params echoes the rates") {
    const ModelParams p = validate_params(0.8, 0.9, 0.8, 0.2, 0.0);
    CHECK(p.alpha == 0.8);
    CHECK(p.beta == 0.9);
    CHECK(p.mu == 0.8);
    CHECK(p.d0 == 0.2);
    CHECK(p.d1 == 0.0);
}

TEST_CASE("non-finite input is rejected") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(validate_params(nan, 0.9, 0.8, 0.2, 0.0), NonFiniteInput);
    CHECK_THROWS_AS(validate_params(0.8, inf, 0.8, 0.2, 0.0), NonFiniteInput);
    CHECK_THROWS_AS(validate_params(0.8, 0.9, -inf, 0.2, 0.0), NonFiniteInput);
}

TEST_CASE("sign constraints are enforced") {
    CHECK_THROWS_AS(validate_params(0.0, 0.9, 0.8, 0.2, 0.0),
                    SignConstraintViolated);
    CHECK_THROWS_AS(validate_params(0.8, -0.1, 0.8, 0.2, 0.0),
                    SignConstraintViolated);
    CHECK_THROWS_AS(validate_params(0.8, 0.9, 0.0, 0.2, 0.0),
                    SignConstraintViolated);
    CHECK_THROWS_AS(validate_params(0.8, 0.9, 0.8, -0.2, 0.0),
                    SignConstraintViolated);
    CHECK_THROWS_AS(validate_params(0.8, 0.9, 0.8, 0.2, -1.0),
                    SignConstraintViolated);
}

TEST_CASE("lemma1_violation names the broken condition") {
    const ModelParams a = validate_params(0.9, 0.5, 0.5, 0.2, 0.0);
    REQUIRE(lemma1_violation(a).has_value());
    CHECK(lemma1_violation(a)->find("alpha + d0") != std::string::npos);

    const ModelParams b = validate_params(0.5, 0.8, 0.5, 0.1, 0.3);
    REQUIRE(lemma1_violation(b).has_value());
    CHECK(lemma1_violation(b)->find("d1") != std::string::npos);

    const ModelParams ok = validate_params(0.8, 0.9, 0.8, 0.2, 0.0);
    CHECK_FALSE(lemma1_violation(ok).has_value());
}
