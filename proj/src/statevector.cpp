#include "pepqc/statevector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace pepqc {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

void check_qubit(int q, int n, const char* what) {
    if (q < 1 || q > n)
        throw std::out_of_range(std::string(what) + " qubit index out of range");
}

}  // namespace

StateVector::StateVector(int n) : n_(n) {
    if (n < 1 || n > kMaxQubits)
        throw std::invalid_argument("qubit count must be in [1, " +
                                std::to_string(kMaxQubits) + "]");
    amp_.assign(std::size_t{1} << n, {0.0, 0.0});
    amp_[0] = 1.0;
}

void StateVector::apply(const Gate& g) {
    check_qubit(g.target, n_, "target");
    const std::size_t dim = amp_.size();
    const std::size_t m = std::size_t{1} << (n_ - g.target);  // qubit 1 = MSB

    auto for_pairs = [&](auto&& body) {
        for (std::size_t base = 0; base < dim; base += 2 * m)
            for (std::size_t off = 0; off < m; ++off) body(base + off);
    };

    switch (g.kind) {
        case Gate::Kind::RZ: {
            const std::complex<double> e0 = std::exp(-kImag * (g.angle / 2));
            const std::complex<double> e1 = std::exp(kImag * (g.angle / 2));
            for_pairs([&](std::size_t i) {
                amp_[i] *= e0;
                amp_[i | m] *= e1;
            });
            break;
        }
        case Gate::Kind::RY: {
            const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
            for_pairs([&](std::size_t i) {
                const auto a0 = amp_[i], a1 = amp_[i | m];
                amp_[i] = c * a0 - s * a1;
                amp_[i | m] = s * a0 + c * a1;
            });
            break;
        }
        case Gate::Kind::Hadamard: {
            const double r = 1.0 / std::sqrt(2.0);
            for_pairs([&](std::size_t i) {
                const auto a0 = amp_[i], a1 = amp_[i | m];
                amp_[i] = r * (a0 + a1);
                amp_[i | m] = r * (a0 - a1);
            });
            break;
        }
        case Gate::Kind::InvPhase: {  // S^dagger = diag(1, -i)
            for_pairs([&](std::size_t i) { amp_[i | m] *= -kImag; });
            break;
        }
        case Gate::Kind::CNOT: {
            check_qubit(g.control, n_, "control");
            if (g.control == g.target)
                throw std::invalid_argument("CNOT control equals target");
            const std::size_t cm = std::size_t{1} << (n_ - g.control);
            for (std::size_t i = 0; i < dim; ++i)
                if ((i & cm) && !(i & m)) std::swap(amp_[i], amp_[i | m]);
            break;
        }
        case Gate::Kind::RPauli: {
            if (g.axis == 'Z') {
                apply(Gate::rz(g.target, g.angle));
            } else if (g.axis == 'Y') {
                apply(Gate::ry(g.target, g.angle));
            } else if (g.axis == 'X') {
                const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
                for_pairs([&](std::size_t i) {
                    const auto a0 = amp_[i], a1 = amp_[i | m];
                    amp_[i] = c * a0 - kImag * s * a1;
                    amp_[i | m] = -kImag * s * a0 + c * a1;
                });
            } else {
                throw std::invalid_argument("RPauli axis must be X, Y or Z");
            }
            break;
        }
    }
}

void StateVector::apply(const std::vector<Gate>& gates) {
    for (const auto& g : gates) apply(g);
}

double StateVector::norm_sq() const {
    double s = 0;
    for (const auto& a : amp_) s += std::norm(a);
    return s;
}

std::vector<Gate> basis_change_gates(const PauliString& p) {
    std::vector<Gate> gates;
    for (int q = 1; q <= p.n(); ++q) {
        switch (p.axes[q - 1]) {
            case 'X':
                gates.push_back(Gate::hadamard(q));
                break;
            case 'Y':
                gates.push_back(Gate::inv_phase(q));
                gates.push_back(Gate::hadamard(q));
                break;
            default:
                break;
        }
    }
    return gates;
}

double expectation(const StateVector& s, const PauliString& p) {
    if (p.n() != s.n()) throw std::invalid_argument("Pauli/state length mismatch");
    const int n = s.n();
    const auto& amp = s.amplitudes();

    // P|i> = c(i)|i ^ xmask> with c(i) the product of per-qubit factors:
    // Z -> (-1)^bit, Y -> i(-1)^bit (flips the bit), X -> 1 (flips the bit).
    std::size_t xmask = 0;
    std::size_t zmask = 0;  // qubits contributing (-1)^bit: Z and Y
    int y_count = 0;
    for (int q = 1; q <= n; ++q) {
        const std::size_t m = std::size_t{1} << (n - q);
        switch (p.axes[q - 1]) {
            case 'X': xmask |= m; break;
            case 'Y': xmask |= m; zmask |= m; ++y_count; break;
            case 'Z': zmask |= m; break;
            default: break;
        }
    }
    static const std::complex<double> kPowI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::complex<double> y_phase = kPowI[y_count % 4];
    std::complex<double> acc = 0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
        if (amp[i] == 0.0) continue;
        const int parity = std::popcount(i & zmask) & 1;
        const std::complex<double> c = (parity ? -1.0 : 1.0) * y_phase;
        acc += std::conj(amp[i ^ xmask]) * c * amp[i];
    }
    return acc.real();
}

std::pair<double, double> outcome_probabilities(const StateVector& s, const PauliString& p) {
    if (p.n() != s.n()) throw std::invalid_argument("Pauli/state length mismatch");
    StateVector rotated = s;
    rotated.apply(basis_change_gates(p));
    double plus = 0, minus = 0;
    const auto& amp = rotated.amplitudes();
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const double pr = std::norm(amp[i]);
        if (eigenvalue_of_bitstring(p, i) > 0)
            plus += pr;
        else
            minus += pr;
    }
    return {plus, minus};
}

}  // namespace pepqc
