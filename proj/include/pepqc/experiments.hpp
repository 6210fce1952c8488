#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pepqc/analytics.hpp"
#include "pepqc/ansatz.hpp"
#include "pepqc/estimators.hpp"
#include "pepqc/pauli.hpp"

namespace pepqc {

// Step-size policy of one estimator entry in an experiment grid.
struct EpsPolicy {
    enum class Kind { Fixed, OptimalApprox, OptimalNumeric } kind = Kind::Fixed;
    double value = 0;  // Fixed only
};

struct EstimatorEntry {
    enum class Family { PS, FD, GD } family = Family::PS;
    int J = 1;  // GD only
    EpsPolicy eps;
};

struct ComponentRequest {
    Component type = Component::Gradient;
    ParamIndex first{1, 1};
    ParamIndex second{1, 1};  // Hessians; equals `first` for the diagonal
};

struct ExperimentConfig {
    Circuit circuit;
    std::variant<PauliString, std::string> observable;  // inline Pauli | file path
    ComponentRequest component;
    std::vector<EstimatorEntry> estimators;
    std::vector<long long> n_t;
    int num_circuits = 50;
    int num_trials = 100;
    std::uint64_t seed = 0;
    int jobs = 1;

    void validate() const;  // throws std::invalid_argument with field names
};

ExperimentConfig parse_experiment_config(const std::string& json_text);

struct MseRecord {
    std::string estimator;   // "ps" | "fd" | "gd"
    std::string component;   // "gradient" | "diag_hessian" | "offdiag_hessian"
    int J = 0;               // 0 for PS
    double epsilon = 0;      // 0 for PS
    int n_qubits = 0;
    long long n_t = 0;
    double empirical_mse = 0;
    double std_error = 0;
    std::optional<double> analytic_mse;
    std::uint64_t seed = 0;
    double wall_time = 0;    // seconds; excluded from CSV/JSON output
};

// Ensemble MSE experiment: for every (estimator, N_T) cell, draws
// num_circuits parameter sets, computes the exact component by the
// parameter-shift oracle, runs num_trials sampled estimates and records
// mean((est - exact)^2) with the standard error of the circuit means.
std::vector<MseRecord> run_empirical_mse(const ExperimentConfig& cfg);

// One estimator at one parameter draw; returns (sampled value, exact value).
std::pair<double, double> run_single_estimate(const ExperimentConfig& cfg);

struct HaarReportRow {
    std::string quantity;  // "f^2", "(df)^2", "(ddf)^2", "(ddf')^2"
    double estimate;
    double std_error;
    double target;         // Case-I average
    double rel_dev;
};

struct HaarConfig {
    int n = 4;
    int reps = 5;
    int draws = 2000;
    std::uint64_t seed = 0;
    int jobs = 1;
};

// Monte-Carlo verification of the Case-I circuit averages on a two-module
// hardware-efficient circuit with encoding layers.
std::vector<HaarReportRow> verify_haar(const HaarConfig& cfg);

struct AnalyticSweepRow {
    std::string component;
    int n_qubits;
    int J;
    double eps_opt;          // gd-opt-vs-n
    double mse_opt;          // gd-opt-vs-n
    double n_star;           // nstar-vs-n; NaN if no crossover
    double n_star_lower;     // nstar-vs-n approximation / lower bound
};

enum class SweepKind { GdOptVsN, NstarVsN };

std::vector<AnalyticSweepRow> run_analytic_sweep(SweepKind kind,
                                                 const std::vector<int>& j_list,
                                                 double n_total,
                                                 const std::vector<int>& n_range);

Observable load_hamiltonian(const std::string& path);

// Dense diagonalization of the unnormalized sum_k h_k O_k; returns all 2^n
// eigenvalues in ascending order.
std::vector<double> diagonalize(const Observable& obs);

// CSV columns: estimator,component,J,epsilon,n_qubits,N_T,empirical_mse,
// std_error,analytic_mse,seed.  Floats carry 17 significant digits.
void emit_results(const std::vector<MseRecord>& records, const std::string& path,
                  const std::string& format);
std::string format_results(const std::vector<MseRecord>& records,
                           const std::string& format);
std::vector<MseRecord> parse_results_json(const std::string& json_text);

std::string format_double(double v);  // %.17g

}  // namespace pepqc
