#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "pepqc/ansatz.hpp"
#include "pepqc/pauli.hpp"

namespace pepqc {

// Splittable deterministic stream: the engine seed is a hash of
// (master seed, circuit index, trial index, evaluation index), so parallel
// trials never share a stream.
struct RngStream {
    std::mt19937_64 eng;

    static RngStream make(std::uint64_t master, std::uint64_t circuit,
                          std::uint64_t trial, std::uint64_t eval);
};

struct ShotBudget {
    long long total;      // N_T
    int num_evals;        // function evaluations inside the estimator
    long long per_eval;   // floor(N_T / num_evals); leftovers discarded
};

// Throws std::invalid_argument when N_T < num_evals.
ShotBudget split_budget(long long n_total, int num_evals);

// Binomial frequencies (nu_plus, nu_minus) with nu_plus + nu_minus = 1.
std::pair<double, double> sample_frequencies(double p_plus, double p_minus,
                                             long long n_copies, RngStream& rng);

// Unbiased function estimator: every Pauli term is sampled independently
// with n_copies copies; returns sum_k (h_k/||h||)(nu_plus,k - nu_minus,k).
double estimate_function(const Circuit& c, const std::vector<double>& theta,
                         const std::vector<double>& x, const Observable& obs,
                         long long n_copies, RngStream& rng);

}  // namespace pepqc
