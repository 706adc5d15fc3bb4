#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aoi/slotted.hpp"

using namespace aoi;

namespace {

SlottedSpec make_spec(int T, int N, double alpha, Scheduler sched = Scheduler::uniform_random) {
    SlottedSpec spec;
    spec.horizon = T;
    spec.n_users = N;
    spec.alpha = alpha;
    spec.scheduler = sched;
    return spec;
}

BlockingPlan no_block(int T) {
    BlockingPlan p;
    p.action.assign(static_cast<std::size_t>(T), -1);
    return p;
}

}  // namespace

TEST_CASE("budget and feasibility bookkeeping") {
    const SlottedSpec spec = make_spec(8, 2, 0.25);
    CHECK(spec.budget() == 2);
    BlockingPlan p = no_block(8);
    CHECK(p.feasible(spec));
    p.action[0] = 1;
    p.action[3] = 0;
    CHECK(p.blocked_count() == 2);
    CHECK(p.feasible(spec));
    p.action[5] = 0;
    CHECK_FALSE(p.feasible(spec));  // over budget
    p = no_block(8);
    p.action[0] = 2;  // no such user
    CHECK_FALSE(p.feasible(spec));
    p = no_block(7);  // wrong horizon
    CHECK_FALSE(p.feasible(spec));
}

TEST_CASE("central plan occupies the middle slots") {
    const SlottedSpec spec8 = make_spec(8, 2, 0.25);
    const BlockingPlan c8 = central_block_plan(spec8, 1);
    // B = 2 of T = 8: slots 4 and 5 (1-indexed)
    const std::vector<int> want8 = {-1, -1, -1, 1, 1, -1, -1, -1};
    CHECK(c8.action == want8);

    const SlottedSpec spec9 = make_spec(9, 2, 0.34);  // floor(0.34 * 9) = 3
    const BlockingPlan c9 = central_block_plan(spec9, 0);
    const std::vector<int> want9 = {-1, -1, -1, 0, 0, 0, -1, -1, -1};
    CHECK(c9.action == want9);

    CHECK_THROWS_AS(central_block_plan(spec8, 5), std::invalid_argument);
}

TEST_CASE("blocking a single user everywhere drives its age to (T+3)/2") {
    for (Scheduler sched : {Scheduler::round_robin, Scheduler::uniform_random}) {
        const SlottedSpec spec = make_spec(10, 1, 1.0, sched);
        BlockingPlan p;
        p.action.assign(10, 0);
        const SlottedResult res = simulate_slotted(spec, p);
        CHECK(res.average_age == doctest::Approx(6.5));  // (10 + 3) / 2
    }
}

TEST_CASE("unblocked round robin settles at (N+1)/2") {
    for (int N : {1, 2, 3}) {
        const SlottedSpec spec = make_spec(1200, N, 0.0, Scheduler::round_robin);
        const SlottedResult res = simulate_slotted(spec, no_block(1200));
        CHECK(res.average_age ==
              doctest::Approx((static_cast<double>(N) + 1.0) / 2.0).epsilon(0.01));
    }
}

TEST_CASE("exhaustive oracle on the two-user instance") {
    const SlottedSpec spec = make_spec(8, 2, 0.25);
    const OracleResult oracle = brute_force_oracle(spec);
    // exact rational optimum 8837/4096
    CHECK(oracle.value == doctest::Approx(8837.0 / 4096.0).epsilon(1e-12));
    // the only maximizers aim the full budget at one victim, centrally
    REQUIRE(oracle.maximizers.size() == 2);
    bool victim0 = false, victim1 = false;
    for (const auto& p : oracle.maximizers) {
        if (p.action == central_block_plan(spec, 0).action) victim0 = true;
        if (p.action == central_block_plan(spec, 1).action) victim1 = true;
    }
    CHECK(victim0);
    CHECK(victim1);
    // and the evaluator agrees with the oracle value on that plan
    CHECK(simulate_slotted(spec, central_block_plan(spec, 0)).average_age ==
          doctest::Approx(oracle.value).epsilon(1e-12));
}

TEST_CASE("sub-carrier oracle concentrates the budget on central slots") {
    SlottedSpec spec = make_spec(6, 2, 0.34);  // floor(0.34 * 6) = 2
    spec.variant = SlottedVariant::sub_carrier;
    spec.n_sub = 2;
    const OracleResult oracle = brute_force_oracle(spec);
    REQUIRE(oracle.maximizers.size() == 4);
    bool concentrated = false;
    for (const auto& p : oracle.maximizers) {
        CHECK(p.blocked_count() == 2);
        // every maximizer blocks the central slots 3 and 4
        for (int t = 0; t < 6; ++t) CHECK((p.action[static_cast<std::size_t>(t)] >= 0) == (t == 2 || t == 3));
        if (p.action[2] == p.action[3]) concentrated = true;
    }
    CHECK(concentrated);
}

TEST_CASE("the oracle value is monotone in the budget") {
    double prev = -1.0;
    for (int B = 0; B <= 3; ++B) {
        const SlottedSpec spec = make_spec(6, 2, (static_cast<double>(B) + 0.5) / 6.0);
        const OracleResult oracle = brute_force_oracle(spec);
        CHECK(oracle.value >= prev);
        prev = oracle.value;
    }
}

TEST_CASE("monte carlo agrees with the exact expectation") {
    const SlottedSpec spec = make_spec(10, 3, 0.2);
    const BlockingPlan plan = central_block_plan(spec, 1);
    const SlottedResult exact = simulate_slotted(spec, plan);
    SlottedSpec seeded = spec;
    seeded.seed = 321;
    const SlottedResult mc = simulate_slotted_mc(seeded, plan, 200000);
    CHECK_FALSE(mc.exact);
    CHECK(mc.average_age == doctest::Approx(exact.average_age).epsilon(0.01));

    SlottedSpec sub = spec;
    sub.variant = SlottedVariant::sub_carrier;
    sub.n_sub = 2;
    sub.seed = 321;
    const BlockingPlan cplan = central_block_plan(sub, 0);
    CHECK(simulate_slotted_mc(sub, cplan, 200000).average_age ==
          doctest::Approx(simulate_slotted(sub, cplan).average_age).epsilon(0.01));
}

TEST_CASE("deterministic max-age scheduler evaluation") {
    const SlottedSpec spec = make_spec(4, 2, 0.25, Scheduler::max_age);
    CHECK(simulate_slotted(spec, no_block(4)).average_age == doctest::Approx(1.5));
    BlockingPlan p = no_block(4);
    p.action[0] = 0;  // deny the first pick
    CHECK(simulate_slotted(spec, p).average_age == doctest::Approx(1.75));
}

TEST_CASE("instance guards refuse blow-ups") {
    SlottedSpec big = make_spec(30, 3, 0.5);
    CHECK_THROWS_AS(brute_force_oracle(big), std::invalid_argument);
    SlottedSpec joint = make_spec(10, 9, 0.1, Scheduler::max_age);
    joint.variant = SlottedVariant::sub_carrier;
    joint.n_sub = 2;
    CHECK_THROWS_AS(simulate_slotted(joint, no_block(10)), std::invalid_argument);
    CHECK_THROWS_AS(simulate_slotted(make_spec(4, 2, 0.0), no_block(5)), std::invalid_argument);
}
