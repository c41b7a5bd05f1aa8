#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mosqdyn/analysis.hpp"
#include "mosqdyn/io.hpp"

using namespace mosqdyn;

namespace {

ModelParams fig1_params() { return validate_params(0.8, 0.9, 0.8, 0.2, 0.0); }

// lemma1-valid rates with beta comfortably below the extinction threshold
// so orbits contract at a testable pace.
struct SubcriticalSampler {
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> u01{0.0, 1.0};

    explicit SubcriticalSampler(unsigned seed) : rng(seed) {}

    ModelParams next() {
        const double alpha = 0.2 + 0.75 * u01(rng);
        const double d0 =
            0.05 + std::max(0.0, 1.0 - alpha - 0.05) * u01(rng);
        const double mu = 0.3 + 0.7 * u01(rng);
        const ModelParams base = validate_params(alpha, 1.0, mu, d0, 0.0);
        const double t1 = regime_thresholds(base).t1;
        const double beta = t1 * (0.2 + 0.6 * u01(rng));
        return validate_params(alpha, beta, mu, d0, 0.0);
    }
};

// Naive rescan used as the oracle for the bound-entry index.
std::optional<std::size_t> scan_bounds(const Trajectory& t) {
    const OrbitBounds b = orbit_bounds(t.params);
    std::optional<std::size_t> idx;
    for (std::size_t k = 0; k < t.points.size(); ++k) {
        const bool inside =
            t.points[k].x < b.x_bound && t.points[k].y < b.y_bound;
        if (inside && !idx) idx = k;
        if (!inside) idx.reset();
    }
    if (idx) *idx += t.first_index;
    return idx;
}

} // namespace

TEST_CASE("orbit bounds of the running example") {
    const OrbitBounds b = orbit_bounds(fig1_params());
    CHECK(b.x_bound == doctest::Approx(4.5).epsilon(1e-14));
    CHECK(b.y_bound == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("bound entry is immediate for a start inside") {
    const Trajectory t = iterate_w0(State2{0.002, 0.2}, fig1_params(), 500);
    const auto idx = verify_eventual_bounds(t);
    REQUIRE(idx.has_value());
    CHECK(*idx == 0);
}

TEST_CASE("bound entry from far outside, matching the rescan oracle") {
    const Trajectory t = iterate_w0(State2{10.0, 5.0}, fig1_params(), 2000);
    const auto idx = verify_eventual_bounds(t);
    REQUIRE(idx.has_value());
    CHECK(*idx > 0);
    CHECK(idx == scan_bounds(t));
}

TEST_CASE("bound entry of the constant origin orbit") {
    const Trajectory t = iterate_w0(State2{0.0, 0.0}, fig1_params(), 5);
    const auto idx = verify_eventual_bounds(t);
    REQUIRE(idx.has_value());
    CHECK(*idx == 0);
}

TEST_CASE("too short a horizon yields no bound index") {
    // One step from far outside is not enough to get under x < 4.5.
    const Trajectory t = iterate_w0(State2{50.0, 40.0}, fig1_params(), 1);
    CHECK_FALSE(verify_eventual_bounds(t).has_value());
}

TEST_CASE("monotone tail of the extinction orbit") {
    Trajectory t = iterate_w0(State2{0.002, 0.2}, fig1_params(), 10000, 1e-10);
    const auto idx = monotone_tail(t);
    REQUIRE(idx.has_value());
    // frozen from an independent double-precision simulation of the orbit
    CHECK(*idx == 9);
    CHECK(t.monotone_tail_start == idx);
    for (std::size_t k = *idx; k + 1 < t.points.size(); ++k) {
        CHECK(t.points[k + 1].x <= t.points[k].x);
        CHECK(t.points[k + 1].y <= t.points[k].y);
    }
    // the transient before the tail is genuinely non-monotone
    CHECK((t.points[*idx - 1].x < t.points[*idx].x ||
           t.points[*idx - 1].y < t.points[*idx].y));
}

TEST_CASE("constant orbit has a tail from the start") {
    Trajectory t = iterate_w0(State2{0.0, 0.0}, fig1_params(), 5);
    const auto idx = monotone_tail(t);
    REQUIRE(idx.has_value());
    CHECK(*idx == 0);
}

TEST_CASE("monotone tail refuses the supercritical regime") {
    const ModelParams p = validate_params(0.8, 1.2, 0.8, 0.2, 0.0);
    Trajectory t = iterate_w0(State2{0.1, 0.1}, p, 100);
    CHECK_THROWS_AS(monotone_tail(t), InvalidParams);
}

TEST_CASE("orbit pattern checks pass across the subcritical family") {
    SubcriticalSampler gen(401);
    std::uniform_real_distribution<double> us(0.0, 6.0);
    for (int k = 0; k < 100; ++k) {
        const ModelParams p = gen.next();
        const State2 s0{us(gen.rng), us(gen.rng)};
        const Trajectory t = iterate_w0(s0, p, 3000, 1e-12);
        const OrbitPropertyReport rep = check_orbit_properties(t);
        CHECK_FALSE(rep.joint_increase_at.has_value());
        CHECK_FALSE(rep.decrease_propagation_break_at.has_value());
        CHECK_FALSE(rep.y_envelope_violation_at.has_value());
        CHECK_FALSE(rep.x_envelope_violation_at.has_value());
        CHECK_FALSE(rep.absorption_violation_at.has_value());
        CHECK_FALSE(rep.oscillation_pattern_at.has_value());
        CHECK(rep.all_ok());
    }
}

TEST_CASE("converges_to_origin on the running example") {
    const ConvergenceReport rep =
        converges_to_origin(fig1_params(), State2{0.002, 0.2}, 1e-10, 100000);
    CHECK(rep.verdict == Verdict::ConvergedToOrigin);
    CHECK(std::fabs(rep.final_state.x) < 1e-10);
    CHECK(std::fabs(rep.final_state.y) < 1e-10);
    REQUIRE(rep.bound_entry_index.has_value());
    CHECK(*rep.bound_entry_index == 0);
    REQUIRE(rep.monotone_tail_index.has_value());
    CHECK(*rep.monotone_tail_index == 9);
    CHECK(rep.iterations_used < 1000);
}

TEST_CASE("origin start converges immediately") {
    const ConvergenceReport rep =
        converges_to_origin(fig1_params(), State2{0.0, 0.0}, 1e-10, 100);
    CHECK(rep.verdict == Verdict::ConvergedToOrigin);
    CHECK(rep.iterations_used == 0);
}

TEST_CASE("far start still reaches the origin below the threshold") {
    const ModelParams p = validate_params(0.5, 0.55, 0.5, 0.1, 0.0);
    const ConvergenceReport rep =
        converges_to_origin(p, State2{4.0, 2.0}, 1e-10, 100000);
    CHECK(rep.verdict == Verdict::ConvergedToOrigin);
}

TEST_CASE("budget exhaustion reports Undetermined, not a disproof") {
    const ConvergenceReport rep =
        converges_to_origin(fig1_params(), State2{0.002, 0.2}, 1e-10, 10);
    CHECK(rep.verdict == Verdict::Undetermined);
    CHECK(rep.iterations_used == 10);
}

TEST_CASE("converges_to_origin guards its regime") {
    CHECK_THROWS_AS(converges_to_origin(validate_params(0.8, 1.2, 0.8, 0.2, 0.0),
                                        State2{0.1, 0.1}),
                    InvalidParams);
    CHECK_THROWS_AS(converges_to_origin(validate_params(0.9, 0.5, 0.5, 0.2, 0.0),
                                        State2{0.1, 0.1}),
                    InvalidParams);
}

TEST_CASE("two-cell sweep matches the regime table") {
    SweepGrid grid;
    grid.alpha = {0.8};
    grid.beta = {0.9, 1.2};
    grid.mu = {0.8};
    grid.d0 = {0.2};
    const auto rows = sweep_regimes(grid, State2{0.002, 0.2});
    REQUIRE(rows.size() == 2);

    CHECK(rows[0].regime == Stability::Attracting);
    CHECK(rows[0].verdict == SweepVerdict::ConvergedToOrigin);

    CHECK(rows[1].regime == Stability::Saddle);
    CHECK(rows[1].verdict == SweepVerdict::Exploratory);
    REQUIRE(rows[1].empirical.has_value());
    CHECK(*rows[1].empirical == Verdict::ConvergedToInterior);
    // observed limit sits on the coexistence point (1, 0.5)
    REQUIRE(rows[1].limit.has_value());
    CHECK(rows[1].limit->x == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rows[1].limit->y == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("empty grid gives an empty table") {
    SweepGrid grid;
    CHECK(sweep_regimes(grid, State2{0.1, 0.1}).empty());
}

TEST_CASE("an invalid cell is isolated, others stay intact") {
    SweepGrid grid;
    grid.alpha = {0.8, 0.95};  // second cell violates alpha + d0 <= 1
    grid.beta = {0.9};
    grid.mu = {0.8};
    grid.d0 = {0.2};
    const auto rows = sweep_regimes(grid, State2{0.002, 0.2});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].verdict == SweepVerdict::ConvergedToOrigin);
    CHECK(rows[1].verdict == SweepVerdict::Error);
    REQUIRE(rows[1].error.has_value());
    CHECK(rows[1].error->find("alpha + d0") != std::string::npos);
    CHECK_FALSE(rows[1].regime.has_value());
}

TEST_CASE("sweep rows do not depend on the thread count") {
    SweepGrid grid;
    grid.alpha = {0.4, 0.8};
    grid.beta = {0.5, 0.9, 1.2, 1.6};
    grid.mu = {0.8};
    grid.d0 = {0.1, 0.2};
    SweepOptions one;
    one.threads = 1;
    one.max_iter = 20000;
    SweepOptions many;
    many.threads = 4;
    many.max_iter = 20000;
    const auto a = sweep_regimes(grid, State2{0.002, 0.2}, one);
    const auto b = sweep_regimes(grid, State2{0.002, 0.2}, many);

    std::ostringstream csv_a, csv_b;
    write_sweep_csv(csv_a, a);
    write_sweep_csv(csv_b, b);
    CHECK(csv_a.str() == csv_b.str());
}
