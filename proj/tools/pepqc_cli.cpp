// Command-line front end: experiment runner, analytic sweeps and exact
// diagonalization for Pauli-encoded parametrized quantum circuits.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "pepqc/experiments.hpp"

namespace {

using pepqc::format_double;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::ios_base::failure("cannot open output file: " + out_path);
    out << text;
    if (!out) throw std::ios_base::failure("write failed: " + out_path);
}

pepqc::ExperimentConfig load_config(const std::string& path,
                                    std::optional<std::uint64_t> seed, int jobs) {
    auto cfg = pepqc::parse_experiment_config(read_file(path));
    if (seed) cfg.seed = *seed;
    if (jobs > 0) cfg.jobs = jobs;
    return cfg;
}

struct CommonOpts {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "csv";
    int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required = true) {
    auto* c = cmd->add_option("--config", o.config, "JSON config file");
    if (config_required) c->required();
    cmd->add_option("--seed", o.seed, "master seed (overrides the config)");
    cmd->add_option("--out", o.out, "output path (default: stdout)");
    cmd->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--jobs", o.jobs, "worker threads");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sampled-derivative estimators for Pauli-encoded circuits"};
    app.require_subcommand(1);

    CommonOpts est_o, sweep_o, an_o, nstar_o, haar_o, eig_o;

    auto* cmd_estimate =
        app.add_subcommand("estimate", "one component, one estimator, one draw");
    add_common(cmd_estimate, est_o);

    auto* cmd_sweep = app.add_subcommand("mse-sweep", "empirical MSE ensembles");
    add_common(cmd_sweep, sweep_o);

    auto* cmd_an = app.add_subcommand("analytic-sweep", "closed-form sweeps over n");
    std::string kind = "gd-opt-vs-n";
    std::vector<int> j_list{1, 2, 3};
    std::vector<int> n_range{2, 4, 6, 8};
    double nt = 2000;
    cmd_an->add_option("--kind", kind, "gd-opt-vs-n or nstar-vs-n")
        ->check(CLI::IsMember({"gd-opt-vs-n", "nstar-vs-n"}));
    cmd_an->add_option("--J", j_list, "GD orders");
    cmd_an->add_option("--n", n_range, "qubit counts");
    cmd_an->add_option("--n-t", nt, "total copies per estimator");
    add_common(cmd_an, an_o, false);

    auto* cmd_nstar = app.add_subcommand("nstar", "PS-crossover copy numbers");
    std::vector<int> nstar_j{1};
    std::vector<int> nstar_n{2, 4, 6, 8};
    cmd_nstar->add_option("--J", nstar_j, "GD orders");
    cmd_nstar->add_option("--n", nstar_n, "qubit counts");
    add_common(cmd_nstar, nstar_o, false);

    auto* cmd_haar = app.add_subcommand("verify-haar", "Monte-Carlo circuit averages");
    pepqc::HaarConfig haar;
    cmd_haar->add_option("--n", haar.n, "qubit count");
    cmd_haar->add_option("--reps", haar.reps, "repetitions per trainable module");
    cmd_haar->add_option("--draws", haar.draws, "parameter draws");
    add_common(cmd_haar, haar_o, false);

    auto* cmd_eig = app.add_subcommand("eig", "exact diagonalization of a Hamiltonian");
    std::string ham_path;
    cmd_eig->add_option("hamiltonian", ham_path, "Hamiltonian text file")->required();
    add_common(cmd_eig, eig_o, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*cmd_estimate) {
            const auto cfg = load_config(est_o.config, est_o.seed, est_o.jobs);
            const auto [value, exact] = pepqc::run_single_estimate(cfg);
            nlohmann::json o;
            o["estimator"] = cfg.estimators.front().family == pepqc::EstimatorEntry::Family::PS
                                 ? "ps"
                                 : (cfg.estimators.front().family ==
                                            pepqc::EstimatorEntry::Family::FD
                                        ? "fd"
                                        : "gd");
            o["component"] = pepqc::component_name(cfg.component.type);
            o["value"] = value;
            o["exact"] = exact;
            o["seed"] = cfg.seed;
            write_output(o.dump(2) + "\n", est_o.out);
        } else if (*cmd_sweep) {
            const auto cfg = load_config(sweep_o.config, sweep_o.seed, sweep_o.jobs);
            const auto records = pepqc::run_empirical_mse(cfg);
            write_output(pepqc::format_results(records, sweep_o.format), sweep_o.out);
        } else if (*cmd_an || *cmd_nstar) {
            const bool is_nstar = static_cast<bool>(*cmd_nstar);
            const auto& o = is_nstar ? nstar_o : an_o;
            const auto rows = pepqc::run_analytic_sweep(
                is_nstar || kind == "nstar-vs-n" ? pepqc::SweepKind::NstarVsN
                                                 : pepqc::SweepKind::GdOptVsN,
                is_nstar ? nstar_j : j_list, nt, is_nstar ? nstar_n : n_range);
            if (o.format == "json") {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& r : rows) {
                    nlohmann::json jo;
                    jo["component"] = r.component;
                    jo["n_qubits"] = r.n_qubits;
                    jo["J"] = r.J;
                    if (std::isfinite(r.eps_opt)) jo["eps_opt"] = r.eps_opt;
                    if (std::isfinite(r.mse_opt)) jo["mse_opt"] = r.mse_opt;
                    if (std::isfinite(r.n_star))
                        jo["n_star"] = r.n_star;
                    else if (std::isfinite(r.n_star_lower))
                        jo["n_star"] = nullptr;  // no crossover found
                    if (std::isfinite(r.n_star_lower)) jo["n_star_lower"] = r.n_star_lower;
                    arr.push_back(std::move(jo));
                }
                write_output(arr.dump(2) + "\n", o.out);
            } else {
                std::ostringstream out;
                out << "component,n_qubits,J,eps_opt,mse_opt,n_star,n_star_lower\n";
                for (const auto& r : rows) {
                    auto cell = [](double v) {
                        return std::isfinite(v) ? format_double(v) : std::string();
                    };
                    out << r.component << ',' << r.n_qubits << ',' << r.J << ','
                        << cell(r.eps_opt) << ',' << cell(r.mse_opt) << ','
                        << cell(r.n_star) << ',' << cell(r.n_star_lower) << '\n';
                }
                write_output(out.str(), o.out);
            }
        } else if (*cmd_haar) {
            if (haar_o.seed) haar.seed = *haar_o.seed;
            if (haar_o.jobs > 0) haar.jobs = haar_o.jobs;
            const auto report = pepqc::verify_haar(haar);
            if (haar_o.format == "json") {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& r : report)
                    arr.push_back({{"quantity", r.quantity},
                                   {"estimate", r.estimate},
                                   {"std_error", r.std_error},
                                   {"target", r.target},
                                   {"rel_dev", r.rel_dev}});
                write_output(arr.dump(2) + "\n", haar_o.out);
            } else {
                std::ostringstream out;
                out << "quantity,estimate,std_error,target,rel_dev\n";
                for (const auto& r : report)
                    out << r.quantity << ',' << format_double(r.estimate) << ','
                        << format_double(r.std_error) << ',' << format_double(r.target)
                        << ',' << format_double(r.rel_dev) << '\n';
                write_output(out.str(), haar_o.out);
            }
        } else if (*cmd_eig) {
            const auto obs = pepqc::load_hamiltonian(ham_path);
            const auto eigs = pepqc::diagonalize(obs);
            if (eig_o.format == "json") {
                nlohmann::json o;
                o["terms"] = obs.terms.size();
                o["min_eigenvalue"] = eigs.front();
                o["max_eigenvalue"] = eigs.back();
                o["eigenvalues"] = eigs;
                write_output(o.dump(2) + "\n", eig_o.out);
            } else {
                std::ostringstream out;
                out << "index,eigenvalue\n";
                for (std::size_t i = 0; i < eigs.size(); ++i)
                    out << i << ',' << format_double(eigs[i]) << '\n';
                write_output(out.str(), eig_o.out);
            }
        }
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
