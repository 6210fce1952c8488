#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pepqc {

// Tensor product of single-qubit Paulis over {I,X,Y,Z}; qubit 1 is the
// leftmost letter and maps to the most-significant bit of a basis index.
struct PauliString {
    std::string axes;

    int n() const { return static_cast<int>(axes.size()); }
    bool is_identity() const { return axes.find_first_not_of('I') == std::string::npos; }
    bool operator==(const PauliString& o) const { return axes == o.axes; }
};

PauliString parse_pauli(const std::string& text);

// Eigenvalue of the computational basis state |bits> under a Pauli string
// whose non-identity axes act diagonally (caller rotates bases first):
// the parity (-1)^{sum of bits in the support}.
int eigenvalue_of_bitstring(const PauliString& p, std::uint64_t bits);

// Weighted sum of Pauli strings O = sum_k h_k O_k / ||h||.  Coefficients are
// stored raw; normalization is applied where the observable is consumed.
struct Observable {
    struct Term {
        double h;
        PauliString pauli;
    };
    std::vector<Term> terms;

    double norm() const;
    int n() const { return terms.empty() ? 0 : terms.front().pauli.n(); }
    void validate() const;  // no duplicates, no all-identity term, norm > 0
};

// Plain-text Hamiltonian: one "<coefficient> <Pauli letters>" per line,
// '#' starts a comment line.  Throws std::invalid_argument with the
// offending line number on malformed input.
Observable parse_hamiltonian(std::istream& in);

// sum_k h_k^2 mse_k / ||h||^2
double combine_component_mses(const std::vector<double>& h,
                              const std::vector<double>& per_term_mse);

}  // namespace pepqc
