#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "pepqc/pauli.hpp"

namespace pepqc {

// Qubit indices are 1-based throughout; qubit 1 is the most-significant bit
// of the amplitude index.
struct Gate {
    enum class Kind { RZ, RY, Hadamard, InvPhase, CNOT, RPauli };

    Kind kind;
    int target = 1;
    int control = 0;   // CNOT only
    double angle = 0;  // RZ, RY, RPauli
    char axis = 'Z';   // RPauli only

    static Gate rz(int q, double phi) { return {Kind::RZ, q, 0, phi, 'Z'}; }
    static Gate ry(int q, double phi) { return {Kind::RY, q, 0, phi, 'Y'}; }
    static Gate hadamard(int q) { return {Kind::Hadamard, q}; }
    static Gate inv_phase(int q) { return {Kind::InvPhase, q}; }
    static Gate cnot(int c, int t) { return {Kind::CNOT, t, c}; }
    static Gate rpauli(char axis, int q, double phi) { return {Kind::RPauli, q, 0, phi, axis}; }
};

class StateVector {
  public:
    explicit StateVector(int n);  // |0...0>, 1 <= n <= kMaxQubits

    static constexpr int kMaxQubits = 20;

    int n() const { return n_; }
    std::size_t dim() const { return amp_.size(); }
    const std::vector<std::complex<double>>& amplitudes() const { return amp_; }
    std::vector<std::complex<double>>& amplitudes() { return amp_; }

    void apply(const Gate& g);
    void apply(const std::vector<Gate>& gates);

    double norm_sq() const;

  private:
    int n_;
    std::vector<std::complex<double>> amp_;
};

inline StateVector init_zero(int n) { return StateVector(n); }

// Per-qubit gates G with G p G^dagger diagonal: X -> H, Y -> inv-phase then H.
std::vector<Gate> basis_change_gates(const PauliString& p);

// <s|p|s>, computed directly from amplitudes (no basis rotation).
double expectation(const StateVector& s, const PauliString& p);

// Probabilities of the +1 / -1 eigenspaces of p, via basis_change_gates on a
// copy of the state and an eigenvalue-parity sum.
std::pair<double, double> outcome_probabilities(const StateVector& s, const PauliString& p);

}  // namespace pepqc
