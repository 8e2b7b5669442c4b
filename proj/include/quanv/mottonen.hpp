#pragma once

#include <bit>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "quanv/statevector.hpp"

namespace quanv {

namespace detail {

/// Multiplexed rotation on `target` controlled by all higher qubits
/// (target+1 .. n-1). `angles[m]` is the rotation for control pattern m,
/// where bit j of m is the value of qubit target+1+j. `ry_not_rz` selects
/// the rotation axis.
inline void apply_multiplexed_rotation(Statevector& s, int target,
                                       std::span<const double> angles,
                                       bool ry_not_rz) {
    auto amps = s.amplitudes();
    const std::size_t low_count = std::size_t{1} << target;
    for (std::size_t pattern = 0; pattern < angles.size(); ++pattern) {
        const double a = angles[pattern];
        const std::size_t base = pattern << (target + 1);
        if (ry_not_rz) {
            const double c = std::cos(a / 2.0);
            const double sn = std::sin(a / 2.0);
            for (std::size_t low = 0; low < low_count; ++low) {
                const std::size_t i0 = base | low;
                const std::size_t i1 = i0 | low_count;
                const Complex a0 = amps[i0];
                const Complex a1 = amps[i1];
                amps[i0] = c * a0 - sn * a1;
                amps[i1] = sn * a0 + c * a1;
            }
        } else {
            constexpr Complex i{0.0, 1.0};
            const Complex p0 = std::exp(-i * (a / 2.0));
            const Complex p1 = std::exp(i * (a / 2.0));
            for (std::size_t low = 0; low < low_count; ++low) {
                const std::size_t i0 = base | low;
                const std::size_t i1 = i0 | low_count;
                amps[i0] *= p0;
                amps[i1] *= p1;
            }
        }
    }
}

} // namespace detail

/// Apply the Moettoenen preparation unitary for the given real target
/// amplitudes to the current state. On |0...0> this prepares the target (up
/// to a global phase when the target has signs); inside a re-uploading
/// circuit it acts as an ordinary encoding unitary on whatever state is
/// present.
///
/// The construction disentangles one qubit per step: a cascade of multiplexed
/// RY rotations (qubit n-1 first, each controlled on all higher qubits)
/// places the magnitudes, then a cascade of multiplexed RZ rotations places
/// the sign pattern as relative phases.
inline void apply_mottonen(Statevector& s, std::span<const double> target) {
    const std::size_t len = target.size();
    if (len < 2 || !std::has_single_bit(len)) {
        throw std::invalid_argument(
            "apply_mottonen: amplitude count must be a power of two >= 2");
    }
    const int n = std::countr_zero(len);
    if (n != s.n_qubits()) {
        throw std::invalid_argument(
            "apply_mottonen: amplitude count does not match the register");
    }
    double norm2 = 0.0;
    bool any_negative = false;
    for (const double v : target) {
        norm2 += v * v;
        any_negative = any_negative || v < 0.0;
    }
    if (norm2 < 1e-24) {
        throw std::domain_error("apply_mottonen: zero target vector");
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9) {
        throw std::invalid_argument(
            "apply_mottonen: target vector is not L2-normalized");
    }

    // Magnitude stage. P0/P1 are the squared norms of the two subtrees below
    // (pattern, qubit k); atan2 handles empty subtrees (angle 0).
    std::vector<double> angles;
    for (int k = n - 1; k >= 0; --k) {
        const std::size_t patterns = std::size_t{1} << (n - 1 - k);
        const std::size_t low_count = std::size_t{1} << k;
        angles.assign(patterns, 0.0);
        for (std::size_t m = 0; m < patterns; ++m) {
            double p0 = 0.0;
            double p1 = 0.0;
            const std::size_t base = m << (k + 1);
            for (std::size_t low = 0; low < low_count; ++low) {
                const double v0 = target[base | low];
                const double v1 = target[base | low_count | low];
                p0 += v0 * v0;
                p1 += v1 * v1;
            }
            angles[m] = 2.0 * std::atan2(std::sqrt(p1), std::sqrt(p0));
        }
        detail::apply_multiplexed_rotation(s, k, angles, /*ry_not_rz=*/true);
    }

    if (!any_negative) {
        return;
    }
    // Phase stage: omega_i in {0, pi} encodes the sign of target[i]; each
    // multiplexer applies the difference of subtree-average phases, which
    // composes to omega_i minus a global phase.
    std::vector<double> omega(len, 0.0);
    for (std::size_t idx = 0; idx < len; ++idx) {
        omega[idx] = target[idx] < 0.0 ? std::numbers::pi : 0.0;
    }
    for (int k = n - 1; k >= 0; --k) {
        const std::size_t patterns = std::size_t{1} << (n - 1 - k);
        const std::size_t low_count = std::size_t{1} << k;
        angles.assign(patterns, 0.0);
        for (std::size_t m = 0; m < patterns; ++m) {
            double s0 = 0.0;
            double s1 = 0.0;
            const std::size_t base = m << (k + 1);
            for (std::size_t low = 0; low < low_count; ++low) {
                s0 += omega[base | low];
                s1 += omega[base | low_count | low];
            }
            angles[m] = (s1 - s0) / static_cast<double>(low_count);
        }
        detail::apply_multiplexed_rotation(s, k, angles, /*ry_not_rz=*/false);
    }
}

/// Prepare the given real normalized amplitudes from |0...0>.
inline Statevector mottonen_prepare(std::span<const double> amplitudes) {
    if (amplitudes.size() < 2 || !std::has_single_bit(amplitudes.size())) {
        throw std::invalid_argument(
            "mottonen_prepare: amplitude count must be a power of two >= 2");
    }
    Statevector s(std::countr_zero(amplitudes.size()));
    apply_mottonen(s, amplitudes);
    return s;
}

} // namespace quanv
