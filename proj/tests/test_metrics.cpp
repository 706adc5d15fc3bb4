#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "aoi/metrics.hpp"

using namespace aoi;

TEST_CASE("age integration over a single holding is exact") {
    // packet generated at 0 and held from 0: a(t) = t, average over [0,2] is 1
    const std::vector<Holding> h = {{0.0, 0.0}};
    CHECK(integrate_age(h, 0.0, 2.0) == 1.0);
}

TEST_CASE("age integration across a replacement is exact") {
    // fresh packet accepted at t=1: sawtooth drops back to zero
    const std::vector<Holding> h = {{0.0, 0.0}, {1.0, 1.0}};
    CHECK(integrate_age(h, 0.0, 2.0) == 0.5);
}

TEST_CASE("age integration with stale replacements is exact") {
    // second packet is half a second stale on arrival
    const std::vector<Holding> h = {{0.0, 0.0}, {1.5, 1.0}, {2.0, 2.0}};
    CHECK(integrate_age(h, 0.0, 4.0) == 0.875);
}

TEST_CASE("age integration clips holdings to the span") {
    const std::vector<Holding> h = {{0.0, 0.0}, {1.0, 1.0}};
    // only the second holding overlaps [1, 2]
    CHECK(integrate_age(h, 1.0, 2.0) == 0.5);
    // warmup clipping mid-holding
    CHECK(integrate_age(h, 0.5, 1.0) == 0.75);
}

TEST_CASE("age integration validates its inputs") {
    CHECK_THROWS_AS(integrate_age({}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_age({{0.0, 0.0}}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_age({{2.0, 0.0}}, 0.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_age({{0.0, 0.0}, {2.0, 0.0}, {1.0, 0.0}}, 0.0, 3.0),
                    std::invalid_argument);
}

TEST_CASE("fraction accurate normalizes by nodes and span") {
    MetricsAccumulator acc;
    acc.init(4);
    acc.accurate_integral = 6.0;
    acc.span = 3.0;
    CHECK(fraction_accurate(acc, 4) == doctest::Approx(0.5));
    CHECK_THROWS_AS(fraction_accurate(acc, 0), std::invalid_argument);
}

TEST_CASE("fit_scaling recovers an exact power law") {
    std::vector<std::pair<double, double>> pts;
    for (double n : {8.0, 16.0, 32.0, 64.0, 128.0}) pts.emplace_back(n, 3.0 * std::pow(n, 0.7));
    const ScalingFit fit = fit_scaling(pts);
    CHECK(fit.selected == ScalingModel::power_law);
    CHECK(fit.power_exponent == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(fit.power_prefactor == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(fit.power_r2 == doctest::Approx(1.0));
}

TEST_CASE("fit_scaling recovers an exact logarithmic law") {
    std::vector<std::pair<double, double>> pts;
    for (double n : {8.0, 16.0, 32.0, 64.0, 128.0}) pts.emplace_back(n, 2.0 * std::log(n) + 1.0);
    const ScalingFit fit = fit_scaling(pts);
    CHECK(fit.selected == ScalingModel::logarithmic);
    CHECK(fit.log_coeff == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit.log_intercept == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fit_scaling validates its inputs") {
    CHECK_THROWS_AS(fit_scaling({{8.0, 1.0}, {16.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_scaling({{8.0, 1.0}, {8.0, 2.0}, {16.0, 3.0}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_scaling({{8.0, 1.0}, {16.0, 0.0}, {32.0, 3.0}}), std::invalid_argument);
}

TEST_CASE("sample statistics on a known sample") {
    const SampleStats s = sample_stats({2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0});
    CHECK(s.mean == doctest::Approx(5.0));
    CHECK(s.stddev == doctest::Approx(std::sqrt(32.0 / 7.0)));
    CHECK(s.stderr_mean == doctest::Approx(std::sqrt(32.0 / 7.0) / std::sqrt(8.0)));
    CHECK(s.count == 8);
}

TEST_CASE("normal quantile matches tabulated values") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.9599639845).epsilon(1e-8));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
    CHECK(normal_quantile(0.025) == doctest::Approx(-normal_quantile(0.975)).epsilon(1e-8));
    CHECK(normal_quantile(0.001) == doctest::Approx(-3.0902323062).epsilon(1e-8));
    CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("compare_with_ci separates clearly different samples and is antisymmetric") {
    std::vector<double> low, high;
    for (int i = 0; i < 10; ++i) {
        low.push_back(1.0 + 0.01 * i);
        high.push_back(5.0 + 0.01 * i);
    }
    CHECK(compare_with_ci(low, high) == CiVerdict::a_less);
    CHECK(compare_with_ci(high, low) == CiVerdict::b_less);
    CHECK(compare_with_ci(low, low) == CiVerdict::inconclusive);
    CHECK_THROWS_AS(compare_with_ci({1.0, 2.0}, low), std::invalid_argument);
}

TEST_CASE("age profile folds mirrored positions and checks outward monotonicity") {
    auto flat = [](double v) { return std::vector<double>(8, v); };

    // center-out increasing profile on 5 positions: 1,2,3 by distance
    const AgeProfile up = age_profile({flat(3.0), flat(2.0), flat(1.0), flat(2.0), flat(3.0)});
    REQUIRE(up.mean_by_distance.size() == 3);
    CHECK(up.mean_by_distance[0] == doctest::Approx(1.0));
    CHECK(up.mean_by_distance[1] == doctest::Approx(2.0));
    CHECK(up.mean_by_distance[2] == doctest::Approx(3.0));
    CHECK(up.non_decreasing_outward);

    // even length: the two middle positions fold to distance zero
    const AgeProfile even = age_profile({flat(2.0), flat(1.0), flat(3.0), flat(2.0)});
    REQUIRE(even.mean_by_distance.size() == 2);
    CHECK(even.mean_by_distance[0] == doctest::Approx(2.0));
    CHECK(even.mean_by_distance[1] == doctest::Approx(2.0));

    // center hotter than the edge: clearly not monotone
    std::vector<double> hot, cold;
    for (int i = 0; i < 8; ++i) {
        hot.push_back(5.0 + 0.01 * i);
        cold.push_back(1.0 + 0.01 * i);
    }
    const AgeProfile down = age_profile({cold, hot, cold});
    CHECK_FALSE(down.non_decreasing_outward);
}
