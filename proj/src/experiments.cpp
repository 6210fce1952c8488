#include "pepqc/experiments.hpp"

#include <json.hpp>

#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <complex>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pepqc/sampling.hpp"
#include "pepqc/statevector.hpp"

namespace pepqc {

namespace {

using nlohmann::json;

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Observable resolve_observable(const ExperimentConfig& cfg) {
    if (std::holds_alternative<PauliString>(cfg.observable)) {
        Observable obs;
        obs.terms.push_back({1.0, std::get<PauliString>(cfg.observable)});
        obs.validate();
        return obs;
    }
    return load_hamiltonian(std::get<std::string>(cfg.observable));
}

// Exact multi-term circuit function: sum_k h_k/||h|| <O_k>.
double exact_function(const Circuit& c, const std::vector<double>& theta,
                      const std::vector<double>& x, const Observable& obs) {
    const StateVector sv = run_circuit(c, theta, x);
    const double norm = obs.norm();
    double acc = 0;
    for (const auto& t : obs.terms) acc += t.h / norm * expectation(sv, t.pauli);
    return acc;
}

struct ResolvedEstimator {
    EstimatorEntry::Family family;
    int J;                  // effective order (1 for PS/FD)
    double eps;             // 0 for PS
    std::vector<double> c;  // GD coefficients ({1} for FD)
    std::optional<double> analytic;
};

ResolvedEstimator resolve_estimator(const EstimatorEntry& e, Component comp, double d,
                                    long long n_t) {
    ResolvedEstimator r;
    r.family = e.family;
    if (e.family == EstimatorEntry::Family::PS) {
        r.J = 1;
        r.eps = 0;
        r.analytic = mse_ps(comp, d, static_cast<double>(n_t));
        return r;
    }
    r.J = e.family == EstimatorEntry::Family::FD ? 1 : e.J;
    switch (e.eps.kind) {
        case EpsPolicy::Kind::Fixed:
            r.eps = e.eps.value;
            break;
        case EpsPolicy::Kind::OptimalApprox:
            r.eps = eps_opt_approx(comp, d, static_cast<double>(n_t));
            break;
        case EpsPolicy::Kind::OptimalNumeric:
            r.eps = minimize_over_eps(comp, d, static_cast<double>(n_t), r.J).eps;
            break;
    }
    if (r.family == EstimatorEntry::Family::FD) {
        r.c = {1.0};
        r.analytic = mse_fd(comp, d, static_cast<double>(n_t), r.eps).total;
    } else {
        const auto oc =
            optimal_coefficients(gd_matrices(comp, d, static_cast<double>(n_t), r.eps, r.J));
        r.c.assign(oc.c.data(), oc.c.data() + oc.c.size());
        r.analytic = oc.mse;
    }
    return r;
}

const char* family_name(EstimatorEntry::Family f) {
    switch (f) {
        case EstimatorEntry::Family::PS: return "ps";
        case EstimatorEntry::Family::FD: return "fd";
        case EstimatorEntry::Family::GD: return "gd";
    }
    return "?";
}

double dispatch(const ResolvedEstimator& r, Component comp, const Circuit& circ,
                const ComponentRequest& req, const EvalFn& f,
                const std::vector<double>& theta, long long n_total) {
    const int i = circ.flat_index(req.first);
    const int j = circ.flat_index(comp == Component::Gradient ? req.first : req.second);
    if (r.family == EstimatorEntry::Family::PS) {
        if (comp == Component::Gradient) return ps_gradient(f, theta, i, n_total);
        return ps_hessian(f, theta, i, j, n_total);
    }
    if (comp == Component::Gradient)
        return gd_gradient(f, theta, i, r.J, r.eps, r.c, n_total);
    return gd_hessian(f, theta, i, j, r.J, r.eps, r.c, n_total);
}

// Exact component value through the parameter-shift oracle.
double exact_component(Component comp, const Circuit& circ, const ComponentRequest& req,
                       const EvalFn& f, const std::vector<double>& theta) {
    const int i = circ.flat_index(req.first);
    if (comp == Component::Gradient) return ps_gradient(f, theta, i, 0);
    const int j = circ.flat_index(comp == Component::DiagHessian ? req.first : req.second);
    return ps_hessian(f, theta, i, j, 0);
}

// Per-circuit cache of the eigenspace probabilities at every evaluation
// point; the point set is identical across trials, so only the binomial
// draws are repeated.
struct PointCache {
    const Circuit* circ;
    const Observable* obs;
    const std::vector<double>* x;
    std::vector<std::vector<double>> p_plus;  // [eval_index][term]

    const std::vector<double>& probs(const std::vector<double>& theta, int eval_index) {
        if (eval_index >= static_cast<int>(p_plus.size()))
            p_plus.resize(eval_index + 1);
        auto& cell = p_plus[eval_index];
        if (cell.empty()) {
            const StateVector sv = run_circuit(*circ, theta, *x);
            cell.reserve(obs->terms.size());
            for (const auto& t : obs->terms)
                cell.push_back(outcome_probabilities(sv, t.pauli).first);
        }
        return cell;
    }
};

void for_each_index(int count, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

void ExperimentConfig::validate() const {
    if (num_circuits < 1) throw std::invalid_argument("num_circuits must be >= 1");
    if (num_trials < 1) throw std::invalid_argument("num_trials must be >= 1");
    if (estimators.empty()) throw std::invalid_argument("estimators list is empty");
    if (n_t.empty()) throw std::invalid_argument("n_t list is empty");
    for (long long nt : n_t)
        if (nt < 1) throw std::invalid_argument("n_t entries must be >= 1");
    for (const auto& e : estimators) {
        if (e.family != EstimatorEntry::Family::PS) {
            if (e.family == EstimatorEntry::Family::GD && e.J < 1)
                throw std::invalid_argument("estimators[].J must be >= 1");
            if (e.eps.kind == EpsPolicy::Kind::Fixed && !(e.eps.value > 0))
                throw std::invalid_argument("estimators[].epsilon must be positive");
        }
    }
    circuit.flat_index(component.first);
    if (component.type != Component::Gradient) {
        circuit.flat_index(component.second);
        const bool same = component.first.l == component.second.l &&
                          component.first.mu == component.second.mu;
        if (component.type == Component::DiagHessian && !same)
            throw std::invalid_argument("diag_hessian requires equal indices");
        if (component.type == Component::OffdiagHessian && same)
            throw std::invalid_argument("offdiag_hessian requires distinct indices");
    }
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        cfg.circuit = parse_circuit_spec(j.at("circuit").dump());
        const auto& obs = j.at("observable");
        if (obs.contains("pauli"))
            cfg.observable = parse_pauli(obs["pauli"].get<std::string>());
        else if (obs.contains("hamiltonian"))
            cfg.observable = obs["hamiltonian"].get<std::string>();
        else
            throw std::invalid_argument("observable needs \"pauli\" or \"hamiltonian\"");

        const auto& comp = j.at("component");
        cfg.component.type = component_from_name(comp.at("type").get<std::string>());
        cfg.component.first = {comp.at("l").get<int>(), comp.at("mu").get<int>()};
        if (cfg.component.type == Component::OffdiagHessian)
            cfg.component.second = {comp.at("l2").get<int>(), comp.at("mu2").get<int>()};
        else
            cfg.component.second = cfg.component.first;

        for (const auto& e : j.at("estimators")) {
            EstimatorEntry ent;
            const auto fam = e.at("family").get<std::string>();
            if (fam == "ps")
                ent.family = EstimatorEntry::Family::PS;
            else if (fam == "fd")
                ent.family = EstimatorEntry::Family::FD;
            else if (fam == "gd")
                ent.family = EstimatorEntry::Family::GD;
            else
                throw std::invalid_argument("estimators[].family must be ps|fd|gd");
            if (ent.family == EstimatorEntry::Family::GD) ent.J = e.at("J").get<int>();
            if (ent.family != EstimatorEntry::Family::PS) {
                const auto& eps = e.at("epsilon");
                if (eps.is_number()) {
                    ent.eps = {EpsPolicy::Kind::Fixed, eps.get<double>()};
                } else {
                    const auto policy = eps.get<std::string>();
                    if (policy == "optimal-approx")
                        ent.eps.kind = EpsPolicy::Kind::OptimalApprox;
                    else if (policy == "optimal-numeric")
                        ent.eps.kind = EpsPolicy::Kind::OptimalNumeric;
                    else
                        throw std::invalid_argument(
                            "epsilon must be a number, \"optimal-approx\" or "
                            "\"optimal-numeric\"");
                }
            }
            cfg.estimators.push_back(ent);
        }
        for (const auto& nt : j.at("n_t")) cfg.n_t.push_back(nt.get<long long>());
        cfg.num_circuits = j.value("num_circuits", 50);
        cfg.num_trials = j.value("num_trials", 100);
        cfg.seed = j.value("seed", std::uint64_t{0});
        cfg.jobs = j.value("jobs", 1);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::vector<MseRecord> run_empirical_mse(const ExperimentConfig& cfg) {
    cfg.validate();
    const Observable obs = resolve_observable(cfg);
    if (obs.n() != cfg.circuit.n)
        throw std::invalid_argument("observable qubit count does not match the circuit");
    const double d = std::pow(2.0, cfg.circuit.n);
    const Component comp = cfg.component.type;

    std::vector<double> h;
    for (const auto& t : obs.terms) h.push_back(t.h);

    std::vector<MseRecord> records;
    for (const auto& est : cfg.estimators) {
        for (long long nt : cfg.n_t) {
            const auto t0 = std::chrono::steady_clock::now();
            const ResolvedEstimator r = resolve_estimator(est, comp, d, nt);

            std::vector<double> circuit_means(cfg.num_circuits, 0.0);
            for_each_index(cfg.num_circuits, cfg.jobs, [&](int ci) {
                const auto theta =
                    random_params(cfg.circuit, mix(cfg.seed, 0xA000 + ci));
                const auto x =
                    random_features(cfg.circuit, mix(cfg.seed, 0xB000 + ci));

                const EvalFn exact = [&](const std::vector<double>& th, long long, int) {
                    return exact_function(cfg.circuit, th, x, obs);
                };
                const double truth =
                    exact_component(comp, cfg.circuit, cfg.component, exact, theta);

                PointCache cache{&cfg.circuit, &obs, &x, {}};
                const double norm = obs.norm();
                double acc = 0;
                for (int trial = 0; trial < cfg.num_trials; ++trial) {
                    const EvalFn sampled = [&](const std::vector<double>& th,
                                               long long copies, int eval_index) {
                        const auto& probs = cache.probs(th, eval_index);
                        RngStream rng = RngStream::make(cfg.seed, ci, trial, eval_index);
                        double val = 0;
                        for (std::size_t k = 0; k < probs.size(); ++k) {
                            const auto [np, nm] = sample_frequencies(
                                probs[k], 1.0 - probs[k], copies, rng);
                            val += h[k] / norm * (np - nm);
                        }
                        return val;
                    };
                    const double est_val =
                        dispatch(r, comp, cfg.circuit, cfg.component, sampled, theta, nt);
                    acc += (est_val - truth) * (est_val - truth);
                }
                circuit_means[ci] = acc / cfg.num_trials;
            });

            double mean = 0;
            for (double m : circuit_means) mean += m;
            mean /= cfg.num_circuits;
            double var = 0;
            for (double m : circuit_means) var += (m - mean) * (m - mean);
            var = cfg.num_circuits > 1 ? var / (cfg.num_circuits - 1) : 0.0;

            MseRecord rec;
            rec.estimator = family_name(est.family);
            rec.component = component_name(comp);
            rec.J = est.family == EstimatorEntry::Family::PS ? 0 : r.J;
            rec.epsilon = r.eps;
            rec.n_qubits = cfg.circuit.n;
            rec.n_t = nt;
            rec.empirical_mse = mean;
            rec.std_error = std::sqrt(var / cfg.num_circuits);
            rec.analytic_mse = r.analytic;
            rec.seed = cfg.seed;
            rec.wall_time =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            records.push_back(std::move(rec));
        }
    }
    return records;
}

std::pair<double, double> run_single_estimate(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.estimators.size() != 1 || cfg.n_t.size() != 1)
        throw std::invalid_argument("single estimate needs one estimator and one N_T");
    const Observable obs = resolve_observable(cfg);
    const double d = std::pow(2.0, cfg.circuit.n);
    const Component comp = cfg.component.type;
    const long long nt = cfg.n_t.front();
    const ResolvedEstimator r = resolve_estimator(cfg.estimators.front(), comp, d, nt);

    const auto theta = random_params(cfg.circuit, mix(cfg.seed, 0xA000));
    const auto x = random_features(cfg.circuit, mix(cfg.seed, 0xB000));
    const EvalFn exact = [&](const std::vector<double>& th, long long, int) {
        return exact_function(cfg.circuit, th, x, obs);
    };
    const EvalFn sampled = [&](const std::vector<double>& th, long long copies,
                               int eval_index) {
        RngStream rng = RngStream::make(cfg.seed, 0, 0, eval_index);
        return estimate_function(cfg.circuit, th, x, obs, copies, rng);
    };
    const double truth = exact_component(comp, cfg.circuit, cfg.component, exact, theta);
    const double value = dispatch(r, comp, cfg.circuit, cfg.component, sampled, theta, nt);
    return {value, truth};
}

std::vector<HaarReportRow> verify_haar(const HaarConfig& cfg) {
    if (cfg.draws < 1) throw std::invalid_argument("draws must be >= 1");
    const Circuit circ =
        build_hardware_efficient(cfg.n, 2, cfg.reps, EncodingSpec{}, cfg.seed);
    const double d = std::pow(2.0, cfg.n);

    // Slot placements keep at least one repetition of trainable depth on
    // each side of every differentiated rotation.
    const int q = std::min(2, cfg.n);
    const int r1 = (cfg.reps + 1) / 2, r2 = std::min(2, cfg.reps);
    const ParamIndex i1{1, 3 * cfg.n * (r1 - 1) + 3 * (q - 1) + 2};
    const ParamIndex i2{2, 3 * cfg.n * (r2 - 1) + 3 * (q - 1) + 2};
    const int f1 = circ.flat_index(i1), f2 = circ.flat_index(i2);

    PauliString z1 = parse_pauli("Z" + std::string(cfg.n - 1, 'I'));

    std::vector<std::array<double, 4>> sq(cfg.draws);
    for_each_index(cfg.draws, cfg.jobs, [&](int t) {
        const auto theta = random_params(circ, mix(cfg.seed, 0x5A00 + t));
        const auto x = random_features(circ, mix(cfg.seed, 0x5B00 + t));
        const EvalFn exact = [&](const std::vector<double>& th, long long, int) {
            return evaluate_function(circ, th, x, z1);
        };
        const double f0 = exact(theta, 0, 0);
        const double g = ps_gradient(exact, theta, f1, 0);
        const double hh = ps_hessian(exact, theta, f1, f1, 0);
        const double o = ps_hessian(exact, theta, f1, f2, 0);
        sq[t] = {f0 * f0, g * g, hh * hh, o * o};
    });

    const char* names[4] = {"f^2", "(df)^2", "(ddf)^2", "(ddf')^2"};
    const double targets[4] = {
        squared_average(std::nullopt, CaseLabel::I, d).value,
        squared_average(Component::Gradient, CaseLabel::I, d).value,
        squared_average(Component::DiagHessian, CaseLabel::I, d).value,
        squared_average(Component::OffdiagHessian, CaseLabel::I, d).value,
    };
    std::vector<HaarReportRow> report;
    for (int k = 0; k < 4; ++k) {
        double mean = 0;
        for (const auto& s : sq) mean += s[k];
        mean /= cfg.draws;
        double var = 0;
        for (const auto& s : sq) var += (s[k] - mean) * (s[k] - mean);
        var = cfg.draws > 1 ? var / (cfg.draws - 1) : 0.0;
        report.push_back({names[k], mean, std::sqrt(var / cfg.draws), targets[k],
                          mean / targets[k] - 1.0});
    }
    return report;
}

std::vector<AnalyticSweepRow> run_analytic_sweep(SweepKind kind,
                                                 const std::vector<int>& j_list,
                                                 double n_total,
                                                 const std::vector<int>& n_range) {
    if (j_list.empty() || n_range.empty())
        throw std::invalid_argument("analytic sweep needs J values and a qubit range");
    std::vector<AnalyticSweepRow> rows;
    const Component comps[3] = {Component::Gradient, Component::DiagHessian,
                                Component::OffdiagHessian};
    for (Component comp : comps) {
        for (int n : n_range) {
            const double d = std::pow(2.0, n);
            for (int J : j_list) {
                AnalyticSweepRow row{};
                row.component = component_name(comp);
                row.n_qubits = n;
                row.J = J;
                if (kind == SweepKind::GdOptVsN) {
                    const auto opt = minimize_over_eps(comp, d, n_total, J);
                    row.eps_opt = opt.eps;
                    row.mse_opt = opt.mse;
                    row.n_star = row.n_star_lower = std::nan("");
                } else {
                    const auto root = n_star_numeric(comp, d, J);
                    row.eps_opt = row.mse_opt = std::nan("");
                    row.n_star = root ? *root : std::nan("");
                    row.n_star_lower = J == 1 ? n_star_fd_approx(comp, d)
                                              : n_star_gd_lower(comp, d, J);
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

Observable load_hamiltonian(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open Hamiltonian file: " + path);
    try {
        return parse_hamiltonian(in);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

std::vector<double> diagonalize(const Observable& obs) {
    obs.validate();
    const int n = obs.n();
    if (n > 12)
        throw std::invalid_argument("dense diagonalization capped at 12 qubits");
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    const std::complex<double> powi[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const auto& term : obs.terms) {
        std::size_t xmask = 0, zmask = 0;
        int y_count = 0;
        for (int q = 1; q <= n; ++q) {
            const std::size_t bit = std::size_t{1} << (n - q);
            switch (term.pauli.axes[q - 1]) {
                case 'X': xmask |= bit; break;
                case 'Y': xmask |= bit; zmask |= bit; ++y_count; break;
                case 'Z': zmask |= bit; break;
                default: break;
            }
        }
        for (std::size_t i = 0; i < dim; ++i) {
            const int parity = std::popcount(i & zmask) & 1;
            const std::complex<double> c =
                (parity ? -1.0 : 1.0) * powi[y_count % 4] * term.h;
            m(i ^ xmask, i) += c;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");
    return {solver.eigenvalues().data(),
            solver.eigenvalues().data() + solver.eigenvalues().size()};
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_results(const std::vector<MseRecord>& records,
                           const std::string& format) {
    if (format == "csv") {
        std::ostringstream out;
        out << "estimator,component,J,epsilon,n_qubits,N_T,empirical_mse,std_error,"
               "analytic_mse,seed\n";
        for (const auto& r : records) {
            out << r.estimator << ',' << r.component << ',' << r.J << ','
                << format_double(r.epsilon) << ',' << r.n_qubits << ',' << r.n_t << ','
                << format_double(r.empirical_mse) << ',' << format_double(r.std_error)
                << ',' << (r.analytic_mse ? format_double(*r.analytic_mse) : "") << ','
                << r.seed << '\n';
        }
        return out.str();
    }
    if (format == "json") {
        json arr = json::array();
        for (const auto& r : records) {
            json o;
            o["estimator"] = r.estimator;
            o["component"] = r.component;
            o["J"] = r.J;
            o["epsilon"] = r.epsilon;
            o["n_qubits"] = r.n_qubits;
            o["N_T"] = r.n_t;
            o["empirical_mse"] = r.empirical_mse;
            o["std_error"] = r.std_error;
            if (r.analytic_mse)
                o["analytic_mse"] = *r.analytic_mse;
            else
                o["analytic_mse"] = nullptr;
            o["seed"] = r.seed;
            arr.push_back(std::move(o));
        }
        return arr.dump(2) + "\n";
    }
    throw std::invalid_argument("format must be \"csv\" or \"json\"");
}

std::vector<MseRecord> parse_results_json(const std::string& json_text) {
    const json arr = json::parse(json_text);
    std::vector<MseRecord> out;
    for (const auto& o : arr) {
        MseRecord r;
        r.estimator = o.at("estimator").get<std::string>();
        r.component = o.at("component").get<std::string>();
        r.J = o.at("J").get<int>();
        r.epsilon = o.at("epsilon").get<double>();
        r.n_qubits = o.at("n_qubits").get<int>();
        r.n_t = o.at("N_T").get<long long>();
        r.empirical_mse = o.at("empirical_mse").get<double>();
        r.std_error = o.at("std_error").get<double>();
        if (!o.at("analytic_mse").is_null())
            r.analytic_mse = o["analytic_mse"].get<double>();
        r.seed = o.at("seed").get<std::uint64_t>();
        out.push_back(std::move(r));
    }
    return out;
}

void emit_results(const std::vector<MseRecord>& records, const std::string& path,
                  const std::string& format) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open output file: " + path);
    out << format_results(records, format);
    if (!out) throw std::ios_base::failure("write failed: " + path);
}

}  // namespace pepqc
