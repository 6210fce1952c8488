#include "pepqc/pauli.hpp"

#include <cmath>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pepqc {

PauliString parse_pauli(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("Pauli string is empty");
    for (std::size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z') {
            throw std::invalid_argument("invalid Pauli letter '" + std::string(1, ch) +
                                        "' at position " + std::to_string(i + 1));
        }
    }
    return PauliString{text};
}

int eigenvalue_of_bitstring(const PauliString& p, std::uint64_t bits) {
    const int n = p.n();
    if (n > 0 && (bits >> n) != 0)
        throw std::invalid_argument("bitstring wider than the Pauli string");
    int parity = 0;
    for (int q = 1; q <= n; ++q) {
        if (p.axes[q - 1] == 'I') continue;
        parity ^= static_cast<int>((bits >> (n - q)) & 1u);
    }
    return parity ? -1 : +1;
}

double Observable::norm() const {
    double s = 0;
    for (const auto& t : terms) s += t.h * t.h;
    return std::sqrt(s);
}

void Observable::validate() const {
    if (terms.empty()) throw std::invalid_argument("observable has no terms");
    std::set<std::string> seen;
    for (const auto& t : terms) {
        if (t.pauli.n() != n())
            throw std::invalid_argument("observable terms have mixed qubit counts");
        if (t.pauli.is_identity())
            throw std::invalid_argument("observable contains an all-identity term");
        if (!seen.insert(t.pauli.axes).second)
            throw std::invalid_argument("duplicate Pauli term " + t.pauli.axes);
    }
    if (!(norm() > 0)) throw std::invalid_argument("observable norm is zero");
}

Observable parse_hamiltonian(std::istream& in) {
    Observable obs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string coeff_text, pauli_text, extra;
        if (!(ls >> coeff_text >> pauli_text) || (ls >> extra)) {
            throw std::invalid_argument("line " + std::to_string(lineno) +
                                        ": expected '<coefficient> <Pauli letters>'");
        }
        double h;
        try {
            std::size_t used = 0;
            h = std::stod(coeff_text, &used);
            if (used != coeff_text.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("line " + std::to_string(lineno) +
                                        ": bad coefficient '" + coeff_text + "'");
        }
        try {
            obs.terms.push_back({h, parse_pauli(pauli_text)});
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    obs.validate();
    return obs;
}

double combine_component_mses(const std::vector<double>& h,
                              const std::vector<double>& per_term_mse) {
    if (h.empty() || h.size() != per_term_mse.size())
        throw std::invalid_argument("combine_component_mses: empty or mismatched lists");
    double norm_sq = 0, acc = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        norm_sq += h[k] * h[k];
        acc += h[k] * h[k] * per_term_mse[k];
    }
    if (!(norm_sq > 0)) throw std::invalid_argument("combine_component_mses: zero norm");
    return acc / norm_sq;
}

}  // namespace pepqc
