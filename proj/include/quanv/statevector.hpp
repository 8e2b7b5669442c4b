#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace quanv {

using Complex = std::complex<double>;

inline constexpr int max_qubits = 20;

/// Dense complex amplitude vector over n qubits.
///
/// Convention used throughout: qubit 0 is the *least-significant* bit of the
/// basis-state index, so |q3 q2 q1 q0> has index q0 + 2*q1 + 4*q2 + 8*q3.
class Statevector {
  public:
    explicit Statevector(int n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits < 1 || n_qubits > max_qubits) {
            throw std::invalid_argument("Statevector: qubit count " +
                                        std::to_string(n_qubits) +
                                        " outside supported range [1, " +
                                        std::to_string(max_qubits) + "]");
        }
        amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
        amps_[0] = 1.0;
    }

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    std::span<const Complex> amplitudes() const { return amps_; }
    std::span<Complex> amplitudes() { return amps_; }

    Complex amplitude(std::size_t index) const { return amps_.at(index); }

    double norm_squared() const {
        double s = 0.0;
        for (const Complex& a : amps_) {
            s += std::norm(a);
        }
        return s;
    }

  private:
    std::vector<Complex> amps_;
    int n_qubits_;
};

/// |0...0> on n qubits.
inline Statevector zero_state(int n_qubits) { return Statevector(n_qubits); }

enum class GateKind { rx, ry, rz, h, cnot, rzz };

/// A gate instance: kind, rotation angle (radians; ignored for H and CNOT)
/// and target qubit indices. Rotations follow the exp(-i*phi*G/2) convention
/// with G the Pauli generator; RZZ(phi) = exp(-i*phi*Z(x)Z/2).
struct Gate {
    GateKind kind;
    double angle = 0.0;
    std::array<int, 2> targets{0, 0};
    int arity = 1;

    static Gate rx(int q, double a) { return {GateKind::rx, a, {q, 0}, 1}; }
    static Gate ry(int q, double a) { return {GateKind::ry, a, {q, 0}, 1}; }
    static Gate rz(int q, double a) { return {GateKind::rz, a, {q, 0}, 1}; }
    static Gate h(int q) { return {GateKind::h, 0.0, {q, 0}, 1}; }

    static Gate cnot(int control, int target) {
        require_distinct(control, target, "CNOT");
        return {GateKind::cnot, 0.0, {control, target}, 2};
    }

    static Gate rzz(int a, int b, double angle) {
        require_distinct(a, b, "RZZ");
        return {GateKind::rzz, angle, {a, b}, 2};
    }

  private:
    static void require_distinct(int a, int b, const char* name) {
        if (a == b) {
            throw std::invalid_argument(std::string(name) +
                                        ": target indices must be distinct");
        }
    }
};

/// Row-major 2x2 matrix of a single-qubit gate.
inline std::array<Complex, 4> single_qubit_matrix(const Gate& g) {
    const double c = std::cos(g.angle / 2.0);
    const double s = std::sin(g.angle / 2.0);
    constexpr Complex i{0.0, 1.0};
    switch (g.kind) {
    case GateKind::rx:
        return {Complex{c, 0}, -i * s, -i * s, Complex{c, 0}};
    case GateKind::ry:
        return {Complex{c, 0}, Complex{-s, 0}, Complex{s, 0}, Complex{c, 0}};
    case GateKind::rz:
        return {std::exp(-i * (g.angle / 2.0)), Complex{0, 0}, Complex{0, 0},
                std::exp(i * (g.angle / 2.0))};
    case GateKind::h: {
        const double r = 1.0 / std::sqrt(2.0);
        return {Complex{r, 0}, Complex{r, 0}, Complex{r, 0}, Complex{-r, 0}};
    }
    default:
        throw std::invalid_argument("single_qubit_matrix: gate is not single-qubit");
    }
}

/// Row-major 4x4 matrix of a two-qubit gate. Basis index within the matrix is
/// b(targets[0]) + 2*b(targets[1]).
inline std::array<Complex, 16> two_qubit_matrix(const Gate& g) {
    std::array<Complex, 16> m{};
    constexpr Complex i{0.0, 1.0};
    switch (g.kind) {
    case GateKind::cnot:
        // control = targets[0], target = targets[1]
        m[0 * 4 + 0] = 1.0;
        m[2 * 4 + 2] = 1.0;
        m[3 * 4 + 1] = 1.0;
        m[1 * 4 + 3] = 1.0;
        return m;
    case GateKind::rzz: {
        const Complex same = std::exp(-i * (g.angle / 2.0));
        const Complex diff = std::exp(i * (g.angle / 2.0));
        m[0 * 4 + 0] = same;
        m[1 * 4 + 1] = diff;
        m[2 * 4 + 2] = diff;
        m[3 * 4 + 3] = same;
        return m;
    }
    default:
        throw std::invalid_argument("two_qubit_matrix: gate is not two-qubit");
    }
}

namespace detail {

inline void check_target(const Statevector& s, int q, const char* what) {
    if (q < 0 || q >= s.n_qubits()) {
        throw std::out_of_range(std::string(what) + ": qubit index " +
                                std::to_string(q) + " out of range for " +
                                std::to_string(s.n_qubits()) + " qubits");
    }
}

inline void apply_single_qubit(Statevector& s, int q,
                               const std::array<Complex, 4>& u) {
    auto amps = s.amplitudes();
    const std::size_t step = std::size_t{1} << q;
    const std::size_t dim = amps.size();
    for (std::size_t base = 0; base < dim; base += 2 * step) {
        for (std::size_t low = 0; low < step; ++low) {
            const std::size_t i0 = base + low;
            const std::size_t i1 = i0 + step;
            const Complex a0 = amps[i0];
            const Complex a1 = amps[i1];
            amps[i0] = u[0] * a0 + u[1] * a1;
            amps[i1] = u[2] * a0 + u[3] * a1;
        }
    }
}

} // namespace detail

/// Apply a gate in place. The state stays normalized (all gates are unitary).
inline void apply_gate(Statevector& s, const Gate& g) {
    detail::check_target(s, g.targets[0], "apply_gate");
    if (g.arity == 2) {
        detail::check_target(s, g.targets[1], "apply_gate");
    }
    auto amps = s.amplitudes();
    const std::size_t dim = amps.size();
    switch (g.kind) {
    case GateKind::rx:
    case GateKind::ry:
    case GateKind::rz:
    case GateKind::h:
        detail::apply_single_qubit(s, g.targets[0], single_qubit_matrix(g));
        return;
    case GateKind::cnot: {
        const std::size_t cbit = std::size_t{1} << g.targets[0];
        const std::size_t tbit = std::size_t{1} << g.targets[1];
        for (std::size_t idx = 0; idx < dim; ++idx) {
            if ((idx & cbit) != 0 && (idx & tbit) == 0) {
                std::swap(amps[idx], amps[idx | tbit]);
            }
        }
        return;
    }
    case GateKind::rzz: {
        constexpr Complex i{0.0, 1.0};
        const Complex same = std::exp(-i * (g.angle / 2.0));
        const Complex diff = std::exp(i * (g.angle / 2.0));
        const std::size_t abit = std::size_t{1} << g.targets[0];
        const std::size_t bbit = std::size_t{1} << g.targets[1];
        for (std::size_t idx = 0; idx < dim; ++idx) {
            const bool equal_bits = ((idx & abit) != 0) == ((idx & bbit) != 0);
            amps[idx] *= equal_bits ? same : diff;
        }
        return;
    }
    }
    throw std::invalid_argument("apply_gate: unknown gate kind");
}

/// <Z> on one qubit: +1 weight for basis states with the bit clear, -1 set.
inline double expectation_z(const Statevector& s, int qubit) {
    detail::check_target(s, qubit, "expectation_z");
    const std::size_t bit = std::size_t{1} << qubit;
    double value = 0.0;
    auto amps = s.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        const double p = std::norm(amps[idx]);
        value += (idx & bit) ? -p : p;
    }
    return value;
}

/// |<a|b>|^2.
inline double fidelity(const Statevector& a, const Statevector& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("fidelity: qubit counts differ");
    }
    Complex overlap{0.0, 0.0};
    auto aa = a.amplitudes();
    auto bb = b.amplitudes();
    for (std::size_t idx = 0; idx < aa.size(); ++idx) {
        overlap += std::conj(aa[idx]) * bb[idx];
    }
    return std::norm(overlap);
}

/// Born probabilities |amp|^2 over the computational basis.
inline std::vector<double> probabilities(const Statevector& s) {
    std::vector<double> p(s.dim());
    auto amps = s.amplitudes();
    for (std::size_t idx = 0; idx < p.size(); ++idx) {
        p[idx] = std::norm(amps[idx]);
    }
    return p;
}

} // namespace quanv
