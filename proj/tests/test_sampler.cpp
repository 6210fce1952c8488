#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pepqc/sampling.hpp"

using namespace pepqc;

TEST_CASE("split_budget floors and discards leftovers") {
    const ShotBudget b = split_budget(2000, 3);
    CHECK(b.per_eval == 666);
    CHECK(b.total == 2000);
    CHECK(split_budget(7, 2).per_eval == 3);
    CHECK(split_budget(4, 4).per_eval == 1);
    CHECK_THROWS_AS(split_budget(1, 2), std::invalid_argument);
    CHECK_THROWS_AS(split_budget(0, 1), std::invalid_argument);
}

TEST_CASE("sample_frequencies is deterministic in the stream key") {
    auto r1 = RngStream::make(7, 1, 2, 3);
    auto r2 = RngStream::make(7, 1, 2, 3);
    const auto a = sample_frequencies(0.3, 0.7, 100, r1);
    const auto b = sample_frequencies(0.3, 0.7, 100, r2);
    CHECK(a == b);
    auto r3 = RngStream::make(7, 1, 2, 4);
    int diffs = 0;
    for (int t = 0; t < 20; ++t)
        if (sample_frequencies(0.3, 0.7, 100, r3) != a) ++diffs;
    CHECK(diffs > 0);
}

TEST_CASE("sample_frequencies on degenerate distributions") {
    auto rng = RngStream::make(1, 0, 0, 0);
    CHECK(sample_frequencies(1.0, 0.0, 50, rng) == std::pair<double, double>{1.0, 0.0});
    CHECK(sample_frequencies(0.0, 1.0, 50, rng) == std::pair<double, double>{0.0, 1.0});
}

TEST_CASE("sample_frequencies matches binomial mean and variance") {
    const double p = 0.3;
    const long long n = 100;
    const int reps = 20000;
    auto rng = RngStream::make(2024, 0, 0, 0);
    double s1 = 0, s2 = 0;
    for (int t = 0; t < reps; ++t) {
        const auto [plus, minus] = sample_frequencies(p, 1 - p, n, rng);
        CHECK(plus + minus == doctest::Approx(1.0));
        s1 += plus;
        s2 += plus * plus;
    }
    const double mean = s1 / reps;
    const double var = s2 / reps - mean * mean;
    CHECK(mean == doctest::Approx(p).epsilon(0.02));
    CHECK(var == doctest::Approx(p * (1 - p) / static_cast<double>(n)).epsilon(0.05));
}

TEST_CASE("estimate_function is unbiased with variance (1 - f^2)/N") {
    const Circuit c = build_hardware_efficient(2, 1, 1, std::nullopt, 0);
    const auto theta = random_params(c, 11);
    Observable obs;
    obs.terms = {{1.0, parse_pauli("ZI")}};
    const double f = evaluate_function(c, theta, {}, obs.terms[0].pauli);

    const long long n = 25;
    const int reps = 40000;
    double s1 = 0, s2 = 0;
    for (int t = 0; t < reps; ++t) {
        auto rng = RngStream::make(5, 0, static_cast<std::uint64_t>(t), 0);
        const double est = estimate_function(c, theta, {}, obs, n, rng);
        s1 += est;
        s2 += est * est;
    }
    const double mean = s1 / reps;
    const double var = s2 / reps - mean * mean;
    const double expect_var = (1 - f * f) / static_cast<double>(n);
    CHECK(std::abs(mean - f) < 4 * std::sqrt(expect_var / reps));
    CHECK(var == doctest::Approx(expect_var).epsilon(0.05));
}

TEST_CASE("multi-term estimate respects the coefficient weights") {
    const Circuit c = build_hardware_efficient(2, 1, 1, std::nullopt, 0);
    const auto theta = random_params(c, 3);
    Observable obs;
    obs.terms = {{3.0, parse_pauli("ZI")}, {4.0, parse_pauli("XZ")}};
    const double f = (3.0 * evaluate_function(c, theta, {}, obs.terms[0].pauli) +
                      4.0 * evaluate_function(c, theta, {}, obs.terms[1].pauli)) /
                     5.0;
    const int reps = 20000;
    double s1 = 0;
    for (int t = 0; t < reps; ++t) {
        auto rng = RngStream::make(6, 0, static_cast<std::uint64_t>(t), 0);
        s1 += estimate_function(c, theta, {}, obs, 50, rng);
    }
    CHECK(s1 / reps == doctest::Approx(f).epsilon(0.02));
}
