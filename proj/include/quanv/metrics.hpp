#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "quanv/circuit.hpp"
#include "quanv/rng.hpp"
#include "quanv/statevector.hpp"

namespace quanv {

/// Sampling budgets for the three circuit-quality estimators. Defaults match
/// the conventions of the metrics' source literature.
struct MetricsConfig {
    int n_fidelity_pairs = 5000;
    int n_bins = 75;
    int n_entanglement_samples = 5000;
    int n_theta_samples = 100;
    int n_data_samples = 100;
    double gamma = 1.0;
    double n_effective = 1e5;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_fidelity_pairs < 1 || n_entanglement_samples < 1 ||
            n_theta_samples < 1 || n_data_samples < 1) {
            throw std::invalid_argument("MetricsConfig: counts must be >= 1");
        }
        if (n_bins < 2) {
            throw std::invalid_argument("MetricsConfig: n_bins must be >= 2");
        }
        if (!(gamma > 0.0) || gamma > 1.0) {
            throw std::invalid_argument("MetricsConfig: gamma must be in (0, 1]");
        }
        if (!(n_effective > 1.0)) {
            throw std::invalid_argument("MetricsConfig: n_effective must be > 1");
        }
    }
};

struct MetricsReport {
    CircuitSpec spec;
    MetricsConfig config;
    double expressibility = 0.0;
    double entanglement = 0.0;
    double normalized_effective_dimension = 0.0;
};

/// Fixed reference feature vector used when sampling the parameterized part
/// of a circuit. All-ones keeps every encoding non-degenerate (an all-zero
/// input collapses the higher-order block to bare Hadamards and the
/// amplitude block to the uniform state, whose ansatz orbit is a single
/// product state).
inline std::vector<double> reference_features(int n_features) {
    return std::vector<double>(static_cast<std::size_t>(n_features), 1.0);
}

/// Fidelity density of Haar-random pure-state pairs in Hilbert dimension N:
/// (N-1)(1-F)^(N-2).
inline double haar_pdf(double fidelity_value, std::size_t hilbert_dim) {
    if (hilbert_dim < 2) {
        throw std::invalid_argument("haar_pdf: Hilbert dimension must be >= 2");
    }
    if (fidelity_value < 0.0 || fidelity_value > 1.0) {
        throw std::invalid_argument("haar_pdf: fidelity outside [0, 1]");
    }
    const double n = static_cast<double>(hilbert_dim);
    return (n - 1.0) * std::pow(1.0 - fidelity_value, n - 2.0);
}

/// Probability mass of the Haar fidelity density on [lo, hi]:
/// (1-lo)^(N-1) - (1-hi)^(N-1).
inline double haar_bin_mass(double lo, double hi, std::size_t hilbert_dim) {
    const double n = static_cast<double>(hilbert_dim);
    return std::pow(1.0 - lo, n - 1.0) - std::pow(1.0 - hi, n - 1.0);
}

/// Meyer-Wallach entanglement of a pure state: the average over qubits of the
/// generalized distance between the two sub-vectors obtained by deleting that
/// qubit with value 0 and 1, scaled by 4/N. 0 for product states, 1 when
/// every qubit is maximally entangled with the rest.
inline double meyer_wallach(const Statevector& s) {
    const int n = s.n_qubits();
    if (n < 2) {
        throw std::invalid_argument("meyer_wallach: needs at least 2 qubits");
    }
    auto amps = s.amplitudes();
    const std::size_t dim = amps.size();
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        const std::size_t bit = std::size_t{1} << j;
        const std::size_t low_mask = bit - 1;
        // iota_j(b)|psi>: delete qubit j, keep terms where it equals b
        double uu = 0.0;
        double vv = 0.0;
        Complex uv{0.0, 0.0};
        for (std::size_t idx = 0; idx < dim; idx += 2 * bit) {
            for (std::size_t low = 0; low <= low_mask; ++low) {
                const Complex u = amps[idx | low];
                const Complex v = amps[idx | bit | low];
                uu += std::norm(u);
                vv += std::norm(v);
                uv += std::conj(u) * v;
            }
        }
        // D(u, v) = |u|^2 |v|^2 - |<u, v>|^2  (closed form of the pairwise sum)
        total += uu * vv - std::norm(uv);
    }
    return 4.0 / static_cast<double>(n) * total;
}

namespace detail {

inline Statevector sample_circuit_state(const CircuitSpec& spec,
                                        std::span<const double> features,
                                        Rng& rng) {
    std::vector<double> theta(static_cast<std::size_t>(spec.n_params()));
    for (double& t : theta) {
        t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    return execute_state(spec, features, theta);
}

} // namespace detail

/// KL divergence of the sampled fidelity histogram from the analytic Haar
/// distribution, estimated from n_fidelity_pairs random parameter doublets
/// (theta uniform in [0, 2pi), fixed reference input). Lower is more
/// expressible. Empty sample bins contribute zero (0 log 0 = 0); Haar bins
/// are analytically nonzero.
inline double expressibility(const CircuitSpec& spec,
                             const MetricsConfig& config) {
    spec.validate();
    config.validate();
    const std::vector<double> x = reference_features(spec.n_features);
    const std::size_t hilbert_dim = std::size_t{1} << spec.n_qubits();
    std::vector<std::int64_t> counts(static_cast<std::size_t>(config.n_bins), 0);
    for (int pair = 0; pair < config.n_fidelity_pairs; ++pair) {
        Rng rng(config.seed, static_cast<std::uint64_t>(pair));
        const Statevector a = detail::sample_circuit_state(spec, x, rng);
        const Statevector b = detail::sample_circuit_state(spec, x, rng);
        const double f = fidelity(a, b);
        int bin = static_cast<int>(f * config.n_bins);
        bin = std::min(std::max(bin, 0), config.n_bins - 1);
        ++counts[static_cast<std::size_t>(bin)];
    }
    double kl = 0.0;
    for (int b = 0; b < config.n_bins; ++b) {
        const double p = static_cast<double>(counts[static_cast<std::size_t>(b)]) /
                         static_cast<double>(config.n_fidelity_pairs);
        if (p <= 0.0) {
            continue;
        }
        const double lo = static_cast<double>(b) / config.n_bins;
        const double hi = static_cast<double>(b + 1) / config.n_bins;
        const double q = haar_bin_mass(lo, hi, hilbert_dim);
        kl += p * std::log(p / q);
    }
    return kl;
}

/// Mean Meyer-Wallach measure over n_entanglement_samples parameter draws
/// (theta uniform in [0, 2pi), fixed reference input).
inline double entanglement_capability(const CircuitSpec& spec,
                                      const MetricsConfig& config) {
    spec.validate();
    config.validate();
    if (spec.n_qubits() < 2) {
        throw std::invalid_argument(
            "entanglement_capability: needs at least 2 qubits");
    }
    const std::vector<double> x = reference_features(spec.n_features);
    double acc = 0.0;
    for (int draw = 0; draw < config.n_entanglement_samples; ++draw) {
        Rng rng(config.seed, 0x10000000ULL + static_cast<std::uint64_t>(draw));
        acc += meyer_wallach(detail::sample_circuit_state(spec, x, rng));
    }
    return acc / config.n_entanglement_samples;
}

} // namespace quanv
