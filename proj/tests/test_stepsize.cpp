#include "spslab/stepsize.hpp"
#include "spslab/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace spslab;

TEST_CASE("sps stepsize") {
    // f(x) = x^2/2 at x = 2: ratio = 2/4 = 1/2
    CHECK(sps(2.0, 0.0, 4.0, 1.0, 10.0) == doctest::Approx(0.5));
    CHECK(sps(2.0, 0.0, 4.0, 1.0, 0.1) == doctest::Approx(0.1)); // cap active
    CHECK(sps(0.0, 0.0, 4.0, 1.0, 10.0) == 0.0);                 // zero numerator
    CHECK_THROWS_AS(sps(1.0, 0.0, 0.0, 1.0, 1.0), ZeroGradient);
}

TEST_CASE("decsps recursion") {
    auto state = StepsizeState::init(LambdaSchedule::inv_sqrt(), 1.0);
    // quadratic ratio is exactly 1/2: gamma_0 = 1 * min{1/2, 1}
    const auto [g0, s1] = decsps_next(state, 2.0, 0.0, 4.0);
    CHECK(g0 == doctest::Approx(0.5));
    CHECK(s1.k == 1);
    // the cap gamma_0/lambda_0 = 1/2 now binds regardless of the ratio
    const auto [g1, s2] = decsps_next(s1, 100.0, 0.0, 1.0);
    CHECK(g1 == doctest::Approx(0.5 / std::sqrt(2.0)));
    CHECK_THROWS_AS(decsps_next(s2, 1.0, 0.0, 0.0), ZeroGradient);
}

TEST_CASE("decsps with constant schedule and inactive ratio keeps gamma_init") {
    auto state = StepsizeState::init(LambdaSchedule::constant(1.0), 0.3);
    double gamma = 0.0;
    for (int k = 0; k < 50; ++k) {
        // ratio 10 >> cap 0.3, so the cap always wins
        std::tie(gamma, state) = decsps_next(state, 10.0, 0.0, 1.0);
        CHECK(gamma == 0.3);
    }
}

TEST_CASE("decsps stepsizes decrease along any measurement sequence") {
    SplitMix64 rng(5);
    for (auto schedule : {LambdaSchedule::inv_sqrt(), LambdaSchedule::power(0.3),
                          LambdaSchedule::log_power(1.0), LambdaSchedule::constant(0.8)}) {
        auto state = StepsizeState::init(schedule, 2.0);
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 2000; ++k) {
            const double fval = 10.0 * rng.uniform01();
            const double gradsq = 0.01 + rng.uniform01();
            double gamma;
            std::tie(gamma, state) = decsps_next(state, fval, 0.0, gradsq);
            CHECK(gamma <= prev + 1e-15);
            CHECK(gamma > 0.0);
            prev = gamma;
        }
    }
}

TEST_CASE("sandwich bounds") {
    const auto schedule = LambdaSchedule::inv_sqrt();
    auto [lo0, hi0] = sandwich_bounds(0, schedule, 1.0, 1.0);
    CHECK(lo0 == doctest::Approx(0.5));
    CHECK(hi0 == doctest::Approx(1.0));
    auto [lo3, hi3] = sandwich_bounds(3, schedule, 1.0, 1.0);
    CHECK(lo3 == doctest::Approx(0.25));
    CHECK(hi3 == doctest::Approx(0.5));
    // tiny L_max saturates the min: lo == hi
    auto [lo, hi] = sandwich_bounds(7, schedule, 1.0, 1e-9);
    CHECK(lo == doctest::Approx(hi));
}

TEST_CASE("lambda schedules are positive, decreasing, and behave asymptotically") {
    struct Expect {
        LambdaSchedule schedule;
        bool vanishes;
    };
    const std::vector<Expect> cases{{LambdaSchedule::constant(0.7), false},
                                    {LambdaSchedule::power(0.5), true},
                                    {LambdaSchedule::power(0.9), true},
                                    {LambdaSchedule::log_power(0.5), true},
                                    {LambdaSchedule::log_power(1.0), true},
                                    {LambdaSchedule::inv_sqrt(), true}};
    for (const auto& c : cases) {
        double prev = std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (long k = 0; k <= 1000; ++k) {
            const double lam = c.schedule(k);
            CHECK(lam > 0.0);
            CHECK(lam <= prev);
            prev = lam;
            sum += lam;
        }
        CHECK(sum > 10.0); // divergent partial sums at desk scale
        // slowest case is log_power(0.5) with lambda ~ ln(k)/sqrt(k)
        if (c.vanishes) CHECK(c.schedule(1000000) < 0.02);
    }
    CHECK(LambdaSchedule::power(0.5)(0) == doctest::Approx(1.0));
    CHECK(LambdaSchedule::power(0.5)(3) == doctest::Approx(0.5));
    CHECK(LambdaSchedule::inv_sqrt()(8) == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(LambdaSchedule::constant(0.0), std::invalid_argument);
    CHECK_THROWS_AS(LambdaSchedule::power(1.0), std::invalid_argument);
    CHECK_THROWS_AS(LambdaSchedule::log_power(1.5), std::invalid_argument);
}

TEST_CASE("rule-level constants") {
    StepsizeRule constant;
    constant.kind = StepsizeRule::Kind::Constant;
    constant.constant_gamma = 0.4;
    CHECK(gamma_cap(constant) == 0.4);
    CHECK(surrogate_constant(constant, 1.0) == doctest::Approx(0.8));

    StepsizeRule decsps;
    decsps.kind = StepsizeRule::Kind::DecSps;
    decsps.gamma_init = 0.5;
    decsps.schedule = LambdaSchedule::inv_sqrt();
    CHECK(gamma_cap(decsps) == 0.5);
    CHECK(surrogate_constant(decsps, 1.0) == 1.0); // lambda_0

    decsps.schedule = LambdaSchedule::constant(2.0);
    CHECK(surrogate_constant(decsps, 1.0) == 2.0); // boundary of the m < 2 regime
}
