#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pepqc/ansatz.hpp"
#include "pepqc/pauli.hpp"

using namespace pepqc;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("slot counts") {
    const Circuit a = build_hardware_efficient(4, 2, 1, std::nullopt, 0);
    CHECK(a.params_per_module() == 12);
    CHECK(a.num_params() == 24);
    const Circuit b = build_hardware_efficient(2, 1, 1, std::nullopt, 0);
    CHECK(b.num_params() == 6);
    const Circuit c = build_hardware_efficient(8, 5, 4, std::nullopt, 0);
    CHECK(c.num_params() == 480);
    CHECK(c.params_per_module() == 96);
}

TEST_CASE("build validates its arguments") {
    CHECK_THROWS_AS(build_hardware_efficient(1, 1, 1, std::nullopt, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_hardware_efficient(4, 0, 1, std::nullopt, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_hardware_efficient(4, 1, 0, std::nullopt, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_hardware_efficient(21, 1, 1, std::nullopt, 0), std::invalid_argument);
}

TEST_CASE("flat_index layout: qubit-major within a rep, reps stack by 3n") {
    const Circuit c = build_hardware_efficient(4, 2, 3, std::nullopt, 0);
    CHECK(c.flat_index({1, 1}) == 0);
    CHECK(c.flat_index({1, 4}) == 3);   // qubit 2, first slot
    CHECK(c.flat_index({1, 13}) == 12); // second repetition starts
    CHECK(c.flat_index({2, 1}) == 36);  // module 2
    CHECK_THROWS_AS(c.flat_index({0, 1}), std::out_of_range);
    CHECK_THROWS_AS(c.flat_index({1, 37}), std::out_of_range);
    CHECK_THROWS_AS(c.flat_index({3, 1}), std::out_of_range);
}

TEST_CASE("RY slot of qubit 1 gives f = cos(theta) for Z on qubit 1") {
    const Circuit c = build_hardware_efficient(2, 1, 1, std::nullopt, 0);
    std::vector<double> theta(c.num_params(), 0.0);
    const auto z1 = parse_pauli("ZI");
    for (double t : {0.0, 0.4, kPi / 3, 2.2}) {
        theta[c.flat_index({1, 2})] = t;
        CHECK(evaluate_function(c, theta, {}, z1) == doctest::Approx(std::cos(t)));
    }
}

TEST_CASE("function is 2pi-periodic in every slot") {
    const Circuit c = build_hardware_efficient(3, 2, 2, EncodingSpec{}, 0);
    const auto theta = random_params(c, 5);
    const auto x = random_features(c, 6);
    const auto p = parse_pauli("ZZI");
    const double base = evaluate_function(c, theta, x, p);
    for (int mu : {1, 7, 18}) {
        auto t2 = shifted(c, theta, {2, mu}, 2 * kPi);
        CHECK(evaluate_function(c, t2, x, p) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("shifted adjusts exactly one slot") {
    const Circuit c = build_hardware_efficient(3, 2, 2, std::nullopt, 0);
    const auto theta = random_params(c, 1);
    const auto t2 = shifted(c, theta, {2, 5}, 0.25);
    int changed = 0;
    for (std::size_t i = 0; i < theta.size(); ++i)
        if (theta[i] != t2[i]) ++changed;
    CHECK(changed == 1);
    CHECK(t2[c.flat_index({2, 5})] == doctest::Approx(theta[c.flat_index({2, 5})] + 0.25));
}

TEST_CASE("random_params is deterministic, uniform on [0, 2pi)") {
    const Circuit c = build_hardware_efficient(4, 3, 4, std::nullopt, 0);
    const auto a = random_params(c, 42);
    const auto b = random_params(c, 42);
    CHECK(a == b);
    CHECK(a != random_params(c, 43));
    double mean = 0, lo = 10, hi = -1;
    for (double v : a) {
        mean += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    mean /= static_cast<double>(a.size());
    CHECK(lo >= 0.0);
    CHECK(hi < 2 * kPi);
    CHECK(mean == doctest::Approx(kPi).epsilon(0.15));
}

TEST_CASE("random_features sized by the encoding") {
    const Circuit plain = build_hardware_efficient(4, 2, 1, std::nullopt, 0);
    CHECK(random_features(plain, 1).empty());
    const Circuit enc = build_hardware_efficient(4, 2, 1, EncodingSpec{}, 0);
    CHECK(random_features(enc, 1).size() == 4);
}

TEST_CASE("parse_circuit_spec") {
    const Circuit c = parse_circuit_spec(
        R"({"n": 4, "L": 2, "reps": 5, "topology": "chain", "encoding": {"type": "ry-ladder"}})");
    CHECK(c.n == 4);
    CHECK(c.L == 2);
    CHECK(c.reps == 5);
    CHECK(c.topology == Topology::Chain);
    CHECK(c.encoding.has_value());

    const Circuit d = parse_circuit_spec(R"({"n": 8, "L": 5, "reps": 4, "encoding": null})");
    CHECK_FALSE(d.encoding.has_value());
    CHECK(d.num_params() == 480);

    CHECK_THROWS_AS(parse_circuit_spec(R"({"n": 4})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_circuit_spec(R"({"n": 4, "L": 1, "reps": 1, "topology": "star"})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_circuit_spec("not json"), std::invalid_argument);
}

TEST_CASE("run_circuit rejects wrong-length inputs") {
    const Circuit c = build_hardware_efficient(2, 1, 1, EncodingSpec{}, 0);
    CHECK_THROWS_AS(run_circuit(c, std::vector<double>(5, 0.0), std::vector<double>(2, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_circuit(c, std::vector<double>(6, 0.0), {}), std::invalid_argument);
}

TEST_CASE("translation identity under a single-slot shift") {
    // f(theta + a e_mu) = f - sin(a) s + (1 - cos(a)) h where s, h are the
    // parameter-shift first and second central combinations at shifts pi/2, pi.
    const Circuit c = build_hardware_efficient(4, 2, 2, EncodingSpec{}, 0);
    const auto p = parse_pauli("ZIII");
    for (int t = 0; t < 10; ++t) {
        const auto theta = random_params(c, 100 + t);
        const auto x = random_features(c, 200 + t);
        const ParamIndex idx{1 + t % 2, 1 + (t * 7) % c.params_per_module()};
        const double a = 0.3 + 0.55 * t;
        const double f0 = evaluate_function(c, theta, x, p);
        const double fp = evaluate_function(c, shifted(c, theta, idx, kPi / 2), x, p);
        const double fm = evaluate_function(c, shifted(c, theta, idx, -kPi / 2), x, p);
        const double fpp = evaluate_function(c, shifted(c, theta, idx, kPi), x, p);
        const double fmm = evaluate_function(c, shifted(c, theta, idx, -kPi), x, p);
        const double grad = (fp - fm) / 2;
        const double curv = (fpp - 2 * f0 + fmm) / 4;
        const double lhs = evaluate_function(c, shifted(c, theta, idx, a), x, p);
        const double rhs = f0 + std::sin(a) * grad + (1 - std::cos(a)) * curv;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }
}
