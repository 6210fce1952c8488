#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "pepqc/experiments.hpp"

using namespace pepqc;
namespace {

#ifndef PEPQC_DATA_DIR
#define PEPQC_DATA_DIR "data"
#endif

const std::string kWaterFile = std::string(PEPQC_DATA_DIR) + "/water_sto3g_8q.txt";

std::string small_config(const char* estimators, const char* extra = "") {
    std::string s = R"({
      "circuit": {"n": 2, "L": 1, "reps": 1, "encoding": null},
      "observable": {"pauli": "ZI"},
      "component": {"type": "gradient", "l": 1, "mu": 2},
      "estimators": )";
    s += estimators;
    s += R"(, "n_t": [400], "num_circuits": 8, "num_trials": 40, "seed": 9)";
    s += extra;
    s += "}";
    return s;
}

}  // namespace

TEST_CASE("config parsing and validation") {
    const auto cfg = parse_experiment_config(small_config(
        R"([{"family": "ps"}, {"family": "fd", "epsilon": 0.5},
            {"family": "gd", "J": 2, "epsilon": "optimal-approx"}])"));
    CHECK(cfg.estimators.size() == 3);
    CHECK(cfg.estimators[2].J == 2);
    CHECK(cfg.estimators[2].eps.kind == EpsPolicy::Kind::OptimalApprox);
    CHECK(cfg.component.second.mu == cfg.component.first.mu);

    CHECK_THROWS_AS(parse_experiment_config("{}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_config(small_config(
                        R"([{"family": "sp"}])")),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_config(small_config(
                        R"([{"family": "fd", "epsilon": "optimal"}])")),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_experiment_config(small_config(
                        R"([{"family": "fd", "epsilon": -1}])")),
                    std::invalid_argument);

    // off-diagonal request must name two distinct slots
    auto cfg2 = cfg;
    cfg2.component.type = Component::OffdiagHessian;
    cfg2.component.second = cfg2.component.first;
    CHECK_THROWS_AS(cfg2.validate(), std::invalid_argument);
    cfg2.component.type = Component::DiagHessian;
    cfg2.component.second = ParamIndex{1, 3};
    CHECK_THROWS_AS(cfg2.validate(), std::invalid_argument);

    auto cfg3 = cfg;
    cfg3.num_trials = 0;
    CHECK_THROWS_AS(cfg3.validate(), std::invalid_argument);
    cfg3 = cfg;
    cfg3.n_t = {};
    CHECK_THROWS_AS(cfg3.validate(), std::invalid_argument);
}

TEST_CASE("empirical MSE records carry analytics and sensible magnitudes") {
    const auto cfg = parse_experiment_config(small_config(
        R"([{"family": "ps"}, {"family": "fd", "epsilon": 0.7}])"));
    const auto records = run_empirical_mse(cfg);
    REQUIRE(records.size() == 2);
    for (const auto& r : records) {
        CHECK(r.n_qubits == 2);
        CHECK(r.n_t == 400);
        CHECK(r.empirical_mse > 0);
        CHECK(r.std_error > 0);
        REQUIRE(r.analytic_mse.has_value());
        // same order of magnitude as the closed form (loose sanity band;
        // the tight statistical checks live in the acceptance suite)
        CHECK(r.empirical_mse < 20 * *r.analytic_mse);
        CHECK(r.empirical_mse > *r.analytic_mse / 20);
    }
    CHECK(records[0].estimator == "ps");
    CHECK(records[0].J == 0);
    CHECK(records[0].epsilon == 0);
    CHECK(records[1].estimator == "fd");
    CHECK(records[1].J == 1);
    CHECK(records[1].epsilon == 0.7);
}

TEST_CASE("runs are deterministic in the seed") {
    const auto cfg = parse_experiment_config(small_config(
        R"([{"family": "gd", "J": 2, "epsilon": 0.9}])"));
    const auto a = format_results(run_empirical_mse(cfg), "csv");
    const auto b = format_results(run_empirical_mse(cfg), "csv");
    CHECK(a == b);
    auto cfg2 = cfg;
    cfg2.seed = 10;
    CHECK(format_results(run_empirical_mse(cfg2), "csv") != a);
}

TEST_CASE("CSV and JSON serialization") {
    MseRecord r;
    r.estimator = "fd";
    r.component = "gradient";
    r.J = 1;
    r.epsilon = 0.5;
    r.n_qubits = 4;
    r.n_t = 1000;
    r.empirical_mse = 1.0 / 3.0;
    r.std_error = 0.01;
    r.analytic_mse = 0.3;
    r.seed = 42;

    const auto csv = format_results({r}, "csv");
    CHECK(csv.substr(0, csv.find('\n')) ==
          "estimator,component,J,epsilon,n_qubits,N_T,empirical_mse,std_error,"
          "analytic_mse,seed");
    CHECK(csv.find("0.33333333333333331") != std::string::npos);

    const auto json_text = format_results({r}, "json");
    const auto back = parse_results_json(json_text);
    REQUIRE(back.size() == 1);
    CHECK(back[0].estimator == "fd");
    CHECK(back[0].empirical_mse == r.empirical_mse);
    CHECK(back[0].analytic_mse == r.analytic_mse);
    CHECK(back[0].seed == 42);

    CHECK_THROWS_AS(format_results({r}, "xml"), std::invalid_argument);
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("analytic sweep rows") {
    const auto rows = run_analytic_sweep(SweepKind::NstarVsN, {1}, 0, {2, 3});
    REQUIRE(rows.size() == 6);  // 3 components x 2 qubit counts
    for (const auto& row : rows) {
        CHECK(row.J == 1);
        CHECK(row.n_star_lower > 0);
        if (!std::isnan(row.n_star)) CHECK(row.n_star >= row.n_star_lower * 0.99);
    }
    const auto opt = run_analytic_sweep(SweepKind::GdOptVsN, {1, 2}, 1e4, {2});
    REQUIRE(opt.size() == 6);
    for (const auto& row : opt) {
        CHECK(row.eps_opt > 0);
        CHECK(row.mse_opt > 0);
    }
}

TEST_CASE("water Hamiltonian file loads with 96 terms") {
    const auto obs = load_hamiltonian(kWaterFile);
    CHECK(obs.terms.size() == 96);
    CHECK(obs.n() == 8);
    CHECK(obs.terms[0].h == doctest::Approx(-0.180625859).epsilon(1e-12));
    CHECK(obs.terms[0].pauli.axes == "IIIIIIZI");
    CHECK(obs.norm() == doctest::Approx(0.976484386212940).epsilon(1e-12));
    CHECK_THROWS_AS(load_hamiltonian("/nonexistent/file.txt"), std::ios_base::failure);
}

TEST_CASE("dense diagonalization on a hand-checkable observable") {
    Observable obs;
    obs.terms = {{1.0, parse_pauli("ZI")}, {0.5, parse_pauli("XI")}};
    const auto eigs = diagonalize(obs);
    REQUIRE(eigs.size() == 4);
    const double r = std::sqrt(1.25);
    CHECK(eigs[0] == doctest::Approx(-r).epsilon(1e-12));
    CHECK(eigs[1] == doctest::Approx(-r).epsilon(1e-12));
    CHECK(eigs[3] == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("verify_haar is deterministic and well-formed") {
    HaarConfig hc;
    hc.draws = 50;
    hc.seed = 3;
    const auto rows = verify_haar(hc);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].quantity == "f^2");
    for (const auto& row : rows) {
        CHECK(row.target > 0);
        CHECK(row.estimate > 0);
        CHECK(row.rel_dev == doctest::Approx((row.estimate - row.target) / row.target));
    }
    const auto again = verify_haar(hc);
    CHECK(again[1].estimate == rows[1].estimate);
}

TEST_CASE("single estimate returns a sampled/exact pair") {
    auto cfg = parse_experiment_config(small_config(
        R"([{"family": "ps"}])"));
    const auto [sampled, exact] = run_single_estimate(cfg);
    CHECK(std::abs(exact) <= 1.0);
    CHECK(std::abs(sampled - exact) < 1.0);
}
