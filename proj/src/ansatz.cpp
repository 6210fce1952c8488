#include "pepqc/ansatz.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace pepqc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void apply_ladder(StateVector& sv, const Circuit& c) {
    for (int q = 1; q < c.n; ++q) sv.apply(Gate::cnot(q, q + 1));
    if (c.topology == Topology::Ring && c.n > 2) sv.apply(Gate::cnot(c.n, 1));
}

}  // namespace

int Circuit::flat_index(ParamIndex idx) const {
    if (idx.l < 1 || idx.l > L)
        throw std::out_of_range("module index l out of range");
    if (idx.mu < 1 || idx.mu > params_per_module())
        throw std::out_of_range("slot index mu out of range");
    return (idx.l - 1) * params_per_module() + (idx.mu - 1);
}

Circuit build_hardware_efficient(int n, int L, int reps,
                                 std::optional<EncodingSpec> encoding,
                                 std::uint64_t seed, Topology topology) {
    if (n < 2) throw std::invalid_argument("need n >= 2 qubits");
    if (n > StateVector::kMaxQubits)
        throw std::invalid_argument("qubit count exceeds the statevector cap");
    if (L < 1) throw std::invalid_argument("need L >= 1 trainable modules");
    if (reps < 1) throw std::invalid_argument("need reps >= 1");
    if (encoding && encoding->type != "ry-ladder")
        throw std::invalid_argument("unknown encoding type '" + encoding->type + "'");
    return Circuit{n, L, reps, topology, std::move(encoding), seed};
}

Circuit parse_circuit_spec(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("circuit spec: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("circuit spec must be a JSON object");
    try {
        const int n = j.at("n").get<int>();
        const int L = j.at("L").get<int>();
        const int reps = j.at("reps").get<int>();
        Topology topo = Topology::Chain;
        if (j.contains("topology")) {
            const auto t = j["topology"].get<std::string>();
            if (t == "chain")
                topo = Topology::Chain;
            else if (t == "ring")
                topo = Topology::Ring;
            else
                throw std::invalid_argument("topology must be \"chain\" or \"ring\"");
        }
        std::optional<EncodingSpec> enc;
        if (j.contains("encoding") && !j["encoding"].is_null())
            enc = EncodingSpec{j["encoding"].at("type").get<std::string>()};
        return build_hardware_efficient(n, L, reps, enc, 0, topo);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("circuit spec: ") + e.what());
    }
}

StateVector run_circuit(const Circuit& c, const std::vector<double>& theta,
                        const std::vector<double>& x) {
    if (static_cast<int>(theta.size()) != c.num_params())
        throw std::invalid_argument("parameter vector length mismatch");
    if (static_cast<int>(x.size()) != c.feature_count())
        throw std::invalid_argument("feature vector length mismatch");

    StateVector sv = init_zero(c.n);
    for (int l = 1; l <= c.L; ++l) {
        const int base = (l - 1) * c.params_per_module();
        for (int r = 0; r < c.reps; ++r) {
            for (int q = 1; q <= c.n; ++q) {
                // R = RZ(theta_1) RY(theta_2) RZ(theta_3): rightmost first.
                const int o = base + 3 * c.n * r + 3 * (q - 1);
                sv.apply(Gate::rz(q, theta[o + 2]));
                sv.apply(Gate::ry(q, theta[o + 1]));
                sv.apply(Gate::rz(q, theta[o]));
            }
            apply_ladder(sv, c);
        }
        if (c.encoding) {
            for (int q = 1; q <= c.n; ++q) sv.apply(Gate::ry(q, x[q - 1]));
            apply_ladder(sv, c);
        }
    }
    return sv;
}

double evaluate_function(const Circuit& c, const std::vector<double>& theta,
                         const std::vector<double>& x, const PauliString& obs_term) {
    if (obs_term.n() != c.n)
        throw std::invalid_argument("observable qubit count mismatch");
    return expectation(run_circuit(c, theta, x), obs_term);
}

std::vector<double> shifted(const Circuit& c, const std::vector<double>& theta,
                            ParamIndex idx, double delta) {
    std::vector<double> out = theta;
    out.at(c.flat_index(idx)) += delta;
    return out;
}

std::vector<double> random_params(const Circuit& c, std::uint64_t seed) {
    std::mt19937_64 eng(splitmix64(seed));
    std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
    std::vector<double> theta(c.num_params());
    for (auto& t : theta) t = uni(eng);
    return theta;
}

std::vector<double> random_features(const Circuit& c, std::uint64_t seed) {
    std::mt19937_64 eng(splitmix64(seed ^ 0xfea7a5e5ULL));
    std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
    std::vector<double> x(c.feature_count());
    for (auto& v : x) v = uni(eng);
    return x;
}

}  // namespace pepqc
