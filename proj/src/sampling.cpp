#include "pepqc/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace pepqc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ v); }

}  // namespace

RngStream RngStream::make(std::uint64_t master, std::uint64_t circuit,
                          std::uint64_t trial, std::uint64_t eval) {
    std::uint64_t h = splitmix64(master);
    h = mix(h, circuit);
    h = mix(h, trial);
    h = mix(h, eval);
    RngStream s;
    s.eng.seed(h);
    return s;
}

ShotBudget split_budget(long long n_total, int num_evals) {
    if (num_evals < 1) throw std::invalid_argument("num_evals must be >= 1");
    if (n_total < num_evals)
        throw std::invalid_argument("copy budget N_T = " + std::to_string(n_total) +
                                    " below the evaluation count " +
                                    std::to_string(num_evals));
    return ShotBudget{n_total, num_evals, n_total / num_evals};
}

std::pair<double, double> sample_frequencies(double p_plus, double p_minus,
                                             long long n_copies, RngStream& rng) {
    if (n_copies < 1) throw std::invalid_argument("need at least one copy");
    if (std::abs(p_plus + p_minus - 1.0) > 1e-9 || p_plus < -1e-9 || p_minus < -1e-9)
        throw std::invalid_argument("invalid eigenspace probabilities");
    const double p = std::min(std::max(p_plus, 0.0), 1.0);
    std::binomial_distribution<long long> bin(n_copies, p);
    const double nu_plus = static_cast<double>(bin(rng.eng)) / static_cast<double>(n_copies);
    return {nu_plus, 1.0 - nu_plus};
}

double estimate_function(const Circuit& c, const std::vector<double>& theta,
                         const std::vector<double>& x, const Observable& obs,
                         long long n_copies, RngStream& rng) {
    obs.validate();
    const StateVector sv = run_circuit(c, theta, x);
    const double norm = obs.norm();
    double acc = 0;
    for (const auto& term : obs.terms) {
        const auto [p_plus, p_minus] = outcome_probabilities(sv, term.pauli);
        const auto [nu_plus, nu_minus] = sample_frequencies(p_plus, p_minus, n_copies, rng);
        acc += term.h / norm * (nu_plus - nu_minus);
    }
    return acc;
}

}  // namespace pepqc
