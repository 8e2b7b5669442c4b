#pragma once

#include <complex>
#include <span>
#include <vector>

#include "quanv/statevector.hpp"

// Brute-force oracles shared by the test suites. These deliberately avoid the
// library's gate kernels: dense matrices are built by Kronecker products and
// applied by plain matrix-vector multiplication.
namespace oracle {

using quanv::Complex;

using Matrix = std::vector<std::vector<Complex>>;

inline Matrix identity(std::size_t n) {
    Matrix m(n, std::vector<Complex>(n, Complex{0, 0}));
    for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = 1.0;
    }
    return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    const std::size_t ar = a.size();
    const std::size_t ac = a[0].size();
    const std::size_t br = b.size();
    const std::size_t bc = b[0].size();
    Matrix m(ar * br, std::vector<Complex>(ac * bc, Complex{0, 0}));
    for (std::size_t i = 0; i < ar; ++i) {
        for (std::size_t j = 0; j < ac; ++j) {
            for (std::size_t k = 0; k < br; ++k) {
                for (std::size_t l = 0; l < bc; ++l) {
                    m[i * br + k][j * bc + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    return m;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.size();
    const std::size_t m = b[0].size();
    const std::size_t k = b.size();
    Matrix out(n, std::vector<Complex>(m, Complex{0, 0}));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            for (std::size_t j = 0; j < m; ++j) {
                out[i][j] += a[i][p] * b[p][j];
            }
        }
    }
    return out;
}

inline std::vector<Complex> matvec(const Matrix& a,
                                   std::span<const Complex> v) {
    std::vector<Complex> out(a.size(), Complex{0, 0});
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            out[i] += a[i][j] * v[j];
        }
    }
    return out;
}

/// Full 2^n x 2^n unitary of a gate on an n-qubit register, with qubit 0 as
/// the least-significant index bit. Built by embedding the small matrix via
/// explicit basis bookkeeping rather than the library's kernels.
inline Matrix embed_gate(const quanv::Gate& g, int n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    Matrix m(dim, std::vector<Complex>(dim, Complex{0, 0}));
    if (g.arity == 1) {
        const auto u = quanv::single_qubit_matrix(g);
        const std::size_t bit = std::size_t{1} << g.targets[0];
        for (std::size_t col = 0; col < dim; ++col) {
            const std::size_t b = (col & bit) ? 1 : 0;
            for (std::size_t rb = 0; rb < 2; ++rb) {
                const std::size_t row = rb ? (col | bit) : (col & ~bit);
                m[row][col] += u[rb * 2 + b];
            }
        }
        return m;
    }
    const auto u = quanv::two_qubit_matrix(g);
    const std::size_t bit0 = std::size_t{1} << g.targets[0];
    const std::size_t bit1 = std::size_t{1} << g.targets[1];
    for (std::size_t col = 0; col < dim; ++col) {
        const std::size_t cin = ((col & bit0) ? 1 : 0) + 2 * ((col & bit1) ? 1 : 0);
        for (std::size_t rin = 0; rin < 4; ++rin) {
            std::size_t row = col & ~(bit0 | bit1);
            if (rin & 1) {
                row |= bit0;
            }
            if (rin & 2) {
                row |= bit1;
            }
            m[row][col] += u[rin * 4 + cin];
        }
    }
    return m;
}

/// The Eq.5-7 Meyer-Wallach measure evaluated literally: build the deleted
/// sub-vectors and take the full double sum of |u_i v_j - u_j v_i|^2.
inline double meyer_wallach_literal(const quanv::Statevector& s) {
    const int n = s.n_qubits();
    auto amps = s.amplitudes();
    const std::size_t half = s.dim() / 2;
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        std::vector<Complex> u(half, Complex{0, 0});
        std::vector<Complex> v(half, Complex{0, 0});
        for (std::size_t idx = 0; idx < s.dim(); ++idx) {
            const std::size_t low = idx & ((std::size_t{1} << j) - 1);
            const std::size_t rest = ((idx >> (j + 1)) << j) | low;
            if ((idx >> j) & 1) {
                v[rest] = amps[idx];
            } else {
                u[rest] = amps[idx];
            }
        }
        double dist = 0.0;
        for (std::size_t a = 0; a < half; ++a) {
            for (std::size_t b = 0; b < half; ++b) {
                dist += std::norm(u[a] * v[b] - u[b] * v[a]);
            }
        }
        total += 0.5 * dist;
    }
    return 4.0 / static_cast<double>(n) * total;
}

} // namespace oracle
