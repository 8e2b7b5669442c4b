#pragma once

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "quanv/mottonen.hpp"
#include "quanv/statevector.hpp"

namespace quanv {

/// How classical features enter the circuit.
enum class Encoding { angle_x, angle_y, higher_order, amplitude };

/// Trainable block variants. `basic_entangling` is the production ansatz
/// (per-qubit RX then a CNOT ring); the other two exist for metric
/// diagnostics only.
enum class AnsatzKind { basic_entangling, rotations_only, entanglers_only };

inline const char* to_string(Encoding e) {
    switch (e) {
    case Encoding::angle_x:
        return "angle_x";
    case Encoding::angle_y:
        return "angle_y";
    case Encoding::higher_order:
        return "higher_order";
    case Encoding::amplitude:
        return "amplitude";
    }
    return "?";
}

inline Encoding encoding_from_string(const std::string& name) {
    if (name == "angle_x") return Encoding::angle_x;
    if (name == "angle_y") return Encoding::angle_y;
    if (name == "higher_order") return Encoding::higher_order;
    if (name == "amplitude") return Encoding::amplitude;
    throw std::invalid_argument("unknown encoding '" + name + "'");
}

/// Trainable rotation angles, flat-indexed as layer * n_qubits + qubit.
using ParamVector = std::vector<double>;

/// Full description of one parameterized circuit: encoding block, rescaling
/// factor applied to the features, ansatz, and the re-uploading layer count.
struct CircuitSpec {
    Encoding encoding = Encoding::angle_x;
    int n_features = 4;
    double scaling = std::numbers::pi / 4.0;
    int layers = 1;
    AnsatzKind ansatz = AnsatzKind::basic_entangling;

    /// Amplitude encoding packs 2^n features into n qubits; the others use
    /// one qubit per feature.
    int n_qubits() const {
        if (encoding == Encoding::amplitude) {
            const auto nf = static_cast<std::size_t>(n_features);
            if (n_features < 2 || !std::has_single_bit(nf)) {
                throw std::invalid_argument(
                    "amplitude encoding requires a power-of-two feature count");
            }
            return std::countr_zero(nf);
        }
        return n_features;
    }

    int n_params() const { return layers * n_qubits(); }

    void validate() const {
        if (n_features < 1) {
            throw std::invalid_argument("CircuitSpec: n_features must be >= 1");
        }
        if (layers < 1) {
            throw std::invalid_argument("CircuitSpec: layers must be >= 1");
        }
        if (!(scaling > 0.0)) {
            throw std::invalid_argument("CircuitSpec: scaling must be > 0");
        }
        (void)n_qubits(); // throws for invalid amplitude feature counts
    }
};

namespace diag {

/// Count of all-zero windows routed through the amplitude-encoding uniform
/// fallback since process start.
inline std::atomic<std::uint64_t>& zero_window_events() {
    static std::atomic<std::uint64_t> count{0};
    return count;
}

} // namespace diag

/// Encoding block S(x). Features are rescaled by spec.scaling first; for the
/// amplitude encoding the scaled vector is then L2-normalized (making the
/// rescaling a no-op there), with an all-zero window replaced by the uniform
/// vector so degenerate image patches stay encodable.
inline void apply_encoding(Statevector& s, const CircuitSpec& spec,
                           std::span<const double> features) {
    if (static_cast<int>(features.size()) != spec.n_features) {
        throw std::invalid_argument(
            "apply_encoding: expected " + std::to_string(spec.n_features) +
            " features, got " + std::to_string(features.size()));
    }
    const int n = spec.n_qubits();
    const double f = spec.scaling;
    switch (spec.encoding) {
    case Encoding::angle_x:
        for (int q = 0; q < n; ++q) {
            apply_gate(s, Gate::rx(q, f * features[q]));
        }
        return;
    case Encoding::angle_y:
        for (int q = 0; q < n; ++q) {
            apply_gate(s, Gate::ry(q, f * features[q]));
        }
        return;
    case Encoding::higher_order:
        for (int q = 0; q < n; ++q) {
            apply_gate(s, Gate::h(q));
        }
        for (int q = 0; q < n; ++q) {
            apply_gate(s, Gate::rz(q, f * features[q]));
        }
        // pairwise second-order terms, pairs (i, j) with i < j in ascending order
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                apply_gate(s, Gate::rzz(i, j, f * features[i] * features[j]));
            }
        }
        return;
    case Encoding::amplitude: {
        std::vector<double> v(features.begin(), features.end());
        double norm2 = 0.0;
        for (double& x : v) {
            x *= f;
            norm2 += x * x;
        }
        if (norm2 < 1e-24) {
            const double u = 1.0 / std::sqrt(static_cast<double>(v.size()));
            for (double& x : v) {
                x = u;
            }
            diag::zero_window_events().fetch_add(1, std::memory_order_relaxed);
        } else {
            const double inv = 1.0 / std::sqrt(norm2);
            for (double& x : v) {
                x *= inv;
            }
        }
        apply_mottonen(s, v);
        return;
    }
    }
    throw std::invalid_argument("apply_encoding: unknown encoding");
}

/// Trainable block W(theta) for one layer: RX(theta_q) on each qubit, then
/// CNOTs 0->1, 1->2, ..., n-1->0. Two-qubit registers get a single CNOT
/// (the ring would add a second entangler the circuit diagram never shows).
inline void apply_ansatz(Statevector& s, const CircuitSpec& spec,
                         std::span<const double> layer_params) {
    const int n = s.n_qubits();
    if (spec.ansatz != AnsatzKind::entanglers_only &&
        static_cast<int>(layer_params.size()) != n) {
        throw std::invalid_argument(
            "apply_ansatz: expected " + std::to_string(n) +
            " layer parameters, got " + std::to_string(layer_params.size()));
    }
    if (spec.ansatz != AnsatzKind::entanglers_only) {
        for (int q = 0; q < n; ++q) {
            apply_gate(s, Gate::rx(q, layer_params[q]));
        }
    }
    if (spec.ansatz == AnsatzKind::rotations_only) {
        return;
    }
    if (n == 2) {
        apply_gate(s, Gate::cnot(0, 1));
        return;
    }
    for (int q = 0; q < n; ++q) {
        apply_gate(s, Gate::cnot(q, (q + 1) % n));
    }
}

/// Run the full circuit [S(x) W(theta_l)] x layers and return the final
/// state. Parameters are fresh per layer (flat layout layer*n_qubits+qubit).
inline Statevector execute_state(const CircuitSpec& spec,
                                 std::span<const double> features,
                                 std::span<const double> params) {
    spec.validate();
    const int n = spec.n_qubits();
    if (static_cast<int>(params.size()) != spec.n_params()) {
        throw std::invalid_argument(
            "execute: expected " + std::to_string(spec.n_params()) +
            " parameters, got " + std::to_string(params.size()));
    }
    Statevector s(n);
    for (int layer = 0; layer < spec.layers; ++layer) {
        apply_encoding(s, spec, features);
        apply_ansatz(s, spec,
                     params.subspan(static_cast<std::size_t>(layer) * n,
                                    static_cast<std::size_t>(n)));
    }
    return s;
}

/// Per-qubit <Z> of the executed circuit.
inline std::vector<double> execute(const CircuitSpec& spec,
                                   std::span<const double> features,
                                   std::span<const double> params) {
    const Statevector s = execute_state(spec, features, params);
    std::vector<double> out(static_cast<std::size_t>(s.n_qubits()));
    for (int q = 0; q < s.n_qubits(); ++q) {
        out[static_cast<std::size_t>(q)] = expectation_z(s, q);
    }
    return out;
}

} // namespace quanv
