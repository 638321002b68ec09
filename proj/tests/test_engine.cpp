#include "spslab/engine.hpp"

#include <doctest.h>

#include <map>
#include <sstream>

using namespace spslab;

namespace {

Vector vec1(double a) {
    Vector v(1);
    v << a;
    return v;
}

StepsizeRule constant_rule(double gamma) {
    StepsizeRule r;
    r.kind = StepsizeRule::Kind::Constant;
    r.constant_gamma = gamma;
    return r;
}

StepsizeRule decsps_rule(double gamma_init) {
    StepsizeRule r;
    r.kind = StepsizeRule::Kind::DecSps;
    r.gamma_init = gamma_init;
    r.schedule = LambdaSchedule::inv_sqrt();
    return r;
}

FiniteSumProblem two_quadratics() {
    return FiniteSumProblem({make_quadratic(vec1(1.0), 1.0), make_quadratic(vec1(-1.0), 1.0)},
                            1);
}

} // namespace

TEST_CASE("fixed and cyclic samplers are deterministic") {
    auto fixed = Sampler::fixed(3, {2});
    auto st = init_sampler_state(fixed);
    for (int i = 0; i < 10; ++i) CHECK(sample(fixed, st) == Batch{2});

    auto cyc = Sampler::cyclic(3, {{1}, {2}});
    auto cst = init_sampler_state(cyc);
    CHECK(sample(cyc, cst) == Batch{1});
    CHECK(sample(cyc, cst) == Batch{2});
    CHECK(sample(cyc, cst) == Batch{1});
}

TEST_CASE("uniform sampler hits every subset with equal frequency") {
    auto sampler = Sampler::uniform(3, 2, 99);
    auto st = init_sampler_state(sampler);
    std::map<Batch, int> counts;
    const int draws = 60000;
    for (int i = 0; i < draws; ++i) ++counts[sample(sampler, st)];
    REQUIRE(counts.size() == 3);
    for (const auto& [batch, n] : counts) {
        CHECK(static_cast<int>(batch.size()) == 2);
        CHECK(std::abs(n / static_cast<double>(draws) - 1.0 / 3.0) <= 0.01);
    }
    // same seed, same sequence
    auto st2 = init_sampler_state(sampler);
    auto st3 = init_sampler_state(sampler);
    for (int i = 0; i < 200; ++i) CHECK(sample(sampler, st2) == sample(sampler, st3));
}

TEST_CASE("constant stepsize one-step convergence") {
    FiniteSumProblem p({make_quadratic(vec1(0.0), 1.0)}, 1);
    const auto traj = run(p, constant_rule(1.0), Sampler::fixed(1, {0}), vec1(2.0), 1);
    CHECK(traj.status == RunStatus::Completed);
    CHECK(traj.final_x[0] == 0.0);
    CHECK(traj.iterations == 1);
}

TEST_CASE("starting at the global minimizer exhausts resampling immediately") {
    FiniteSumProblem p({make_quadratic(vec1(0.0), 1.0), make_quadratic(vec1(0.0), 2.0)}, 1);
    const auto traj = run(p, decsps_rule(1.0), Sampler::uniform(2, 1, 3), vec1(0.0), 10);
    CHECK(traj.status == RunStatus::ResampleExhausted);
    CHECK(traj.status_k == 0);
    CHECK(traj.final_x[0] == 0.0);
}

TEST_CASE("resampling skips a zero-gradient batch and never repeats it") {
    // component 0 is flat at x = 0, component 1 is not
    FiniteSumProblem p({make_quadratic(vec1(0.0), 1.0), make_quadratic(vec1(3.0), 1.0)}, 1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto traj =
            run(p, constant_rule(0.5), Sampler::uniform(2, 1, seed), vec1(0.0), 3);
        CHECK(traj.status == RunStatus::Completed);
        REQUIRE(!traj.records.empty());
        CHECK(traj.records[0].batch == Batch{1}); // the only batch with gradient at x0
        CHECK(traj.final_x[0] > 0.0);
    }
    // a fixed sampler has no other batch to offer, so it exhausts instead
    const auto stuck = run(p, constant_rule(0.5), Sampler::fixed(2, {0}), vec1(0.0), 3);
    CHECK(stuck.status == RunStatus::ResampleExhausted);
    CHECK(stuck.status_k == 0);
}

TEST_CASE("divergence sets a status instead of failing") {
    FiniteSumProblem p({make_softplus(vec1(0.004)), make_quadratic(vec1(0.0), 1.0)}, 1);
    RunPolicy policy;
    policy.divergence_threshold = 100.0;
    const auto traj =
        run(p, decsps_rule(1e6), Sampler::fixed(2, {0}), vec1(0.0), 100000, policy);
    CHECK(traj.status == RunStatus::Diverged);
    CHECK(traj.final_x.norm() > 100.0);
}

TEST_CASE("running average") {
    FiniteSumProblem p({make_quadratic(vec1(0.0), 1.0)}, 1);
    // x0=2, gamma=1/2: iterates 2, 1, 1/2, 1/4, ...
    const auto traj = run(p, constant_rule(0.5), Sampler::fixed(1, {0}), vec1(2.0), 4);
    CHECK(running_average(traj, 1)[0] == 2.0);
    CHECK(running_average(traj, 2)[0] == doctest::Approx(1.5));
    CHECK(running_average(traj, 4)[0] == doctest::Approx((2.0 + 1.0 + 0.5 + 0.25) / 4.0));
    CHECK_THROWS(running_average(traj, 0));
    CHECK_THROWS(running_average(traj, 100));
    // incremental xbar in the records agrees with the direct average
    for (const auto& r : traj.records)
        CHECK(r.xbar[0] == doctest::Approx(running_average(traj, r.k + 1)[0]).epsilon(1e-12));
}

TEST_CASE("records replay the update rule") {
    const auto p = two_quadratics();
    const auto traj = run(p, decsps_rule(0.5), Sampler::uniform(2, 1, 17), vec1(2.0), 500);
    REQUIRE(traj.status == RunStatus::Completed);
    Vector x = traj.records[0].x;
    for (const auto& r : traj.records) {
        CHECK((r.x - x).norm() <= 1e-12);
        x = x - r.gamma * p.grad_batch(r.batch, x);
    }
    CHECK((traj.final_x - x).norm() <= 1e-12);
}

TEST_CASE("identical seeds give bit-identical CSV") {
    const auto p = two_quadratics();
    std::ostringstream a, b;
    write_csv(run(p, decsps_rule(0.5), Sampler::uniform(2, 1, 7), vec1(2.0), 300), p.dim(), a);
    write_csv(run(p, decsps_rule(0.5), Sampler::uniform(2, 1, 7), vec1(2.0), 300), p.dim(), b);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("k,batch,gamma,fval,gradsq,lower,xnorm,avg_fval", 0) == 0);
}

TEST_CASE("csv round trip") {
    const auto p = two_quadratics();
    const auto traj = run(p, decsps_rule(0.5), Sampler::uniform(2, 1, 7), vec1(2.0), 50);
    std::stringstream buf;
    write_csv(traj, p.dim(), buf);
    const auto rows = read_csv(buf);
    REQUIRE(rows.size() == traj.records.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].k == traj.records[i].k);
        CHECK(rows[i].gamma == traj.records[i].gamma);
        CHECK(rows[i].fval == traj.records[i].fval);
        CHECK(rows[i].gradsq == traj.records[i].gradsq);
        CHECK(rows[i].xnorm == traj.records[i].x.norm());
    }
}

TEST_CASE("record stride thins records but keeps online checks") {
    const auto p = two_quadratics();
    RunPolicy policy;
    policy.record_stride = 10;
    const auto traj =
        run(p, decsps_rule(0.5), Sampler::uniform(2, 1, 7), vec1(2.0), 100, policy);
    CHECK(traj.records.size() <= 11);
    for (const auto& r : traj.records) CHECK(r.k % 10 == 0);
    CHECK(traj.checks.max_xnorm >= 2.0);
    CHECK(traj.checks.monotone_slack >= -1e-15);
}

TEST_CASE("adversarial fixed sampling escapes monotonically across run lengths") {
    FiniteSumProblem p({make_softplus(vec1(0.004)), make_quadratic(vec1(0.0), 1.0)}, 1);
    RunPolicy policy;
    policy.record_stride = 100;
    double prev_min_last_decade = 0.0;
    for (long k : {1000L, 10000L, 100000L}) {
        const auto traj =
            run(p, decsps_rule(1e6), Sampler::fixed(2, {0}), vec1(0.0), k, policy);
        CHECK(traj.checks.min_xnorm_last_decade > prev_min_last_decade);
        prev_min_last_decade = traj.checks.min_xnorm_last_decade;
        CHECK(traj.checks.final_gradsq < traj.checks.initial_gradsq);
    }
}
