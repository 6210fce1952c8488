#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pepqc/statevector.hpp"

namespace pepqc {

enum class Topology { Chain, Ring };

struct EncodingSpec {
    std::string type = "ry-ladder";  // per-qubit RY(x_j) followed by a CNOT ladder
};

struct ParamIndex {
    int l;   // trainable module, 1-based
    int mu;  // slot within the module, 1-based
};

// Hardware-efficient circuit of L trainable modules W_l, each `reps`
// repetitions of [per-qubit RZ.RY.RZ + nearest-neighbour CNOT ladder],
// with an optional fixed encoding module V_l after every W_l.  Modules act
// in index order: W_1 touches |0...0> first.
struct Circuit {
    int n = 0;
    int L = 0;
    int reps = 0;
    Topology topology = Topology::Chain;
    std::optional<EncodingSpec> encoding;
    std::uint64_t seed = 0;  // reserved for randomized structure choices

    int params_per_module() const { return 3 * n * reps; }
    int num_params() const { return L * params_per_module(); }
    int feature_count() const { return encoding ? n : 0; }

    // Flat 0-based position of slot (l, mu).  Within one repetition the
    // slots of qubit q are mu = 3(q-1)+{1,2,3} for the angles of
    // R = RZ(theta_1) RY(theta_2) RZ(theta_3); repetitions stack with
    // stride 3n.
    int flat_index(ParamIndex idx) const;
};

Circuit build_hardware_efficient(int n, int L, int reps,
                                 std::optional<EncodingSpec> encoding,
                                 std::uint64_t seed,
                                 Topology topology = Topology::Chain);

// JSON object {n, L, reps, topology: "chain"|"ring", encoding: null|{type}}.
Circuit parse_circuit_spec(const std::string& json_text);

StateVector run_circuit(const Circuit& c, const std::vector<double>& theta,
                        const std::vector<double>& x);

// f_{Q,k}(theta;x) = <0...0| U^dag O_k U |0...0>, exact.
double evaluate_function(const Circuit& c, const std::vector<double>& theta,
                         const std::vector<double>& x, const PauliString& obs_term);

std::vector<double> shifted(const Circuit& c, const std::vector<double>& theta,
                            ParamIndex idx, double delta);

// Each slot independent uniform on [0, 2pi), deterministic in the seed.
std::vector<double> random_params(const Circuit& c, std::uint64_t seed);

// Uniform [0, 2pi)^n feature draw for the encoding modules.
std::vector<double> random_features(const Circuit& c, std::uint64_t seed);

}  // namespace pepqc
