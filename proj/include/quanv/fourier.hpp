#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "quanv/circuit.hpp"
#include "quanv/rng.hpp"

namespace quanv {

/// n_points equally spaced inputs covering [-1, 1) half-open:
/// t_j = -1 + 2j/n. The half-open grid matches the period of the circuit
/// harmonics at scaling pi, so integer DFT ranks carry them exactly.
inline std::vector<double> univariate_grid(int n_points = 21) {
    if (n_points < 2) {
        throw std::invalid_argument("univariate_grid: need at least 2 points");
    }
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    for (int j = 0; j < n_points; ++j) {
        grid[static_cast<std::size_t>(j)] =
            -1.0 + 2.0 * j / static_cast<double>(n_points);
    }
    return grid;
}

/// Per-qubit <Z> of the circuit when the same scalar input is fed to every
/// feature slot, evaluated over the grid. Amplitude encoding is excluded
/// (its state normalization erases the scalar).
inline std::vector<std::vector<double>>
univariate_outputs(const CircuitSpec& spec, std::span<const double> params,
                   std::span<const double> grid) {
    if (spec.encoding == Encoding::amplitude) {
        throw std::invalid_argument(
            "univariate_outputs: amplitude encoding is not supported");
    }
    spec.validate();
    const int n = spec.n_qubits();
    std::vector<std::vector<double>> out(
        static_cast<std::size_t>(n),
        std::vector<double>(grid.size(), 0.0));
    std::vector<double> features(static_cast<std::size_t>(spec.n_features));
    for (std::size_t j = 0; j < grid.size(); ++j) {
        for (double& f : features) {
            f = grid[j];
        }
        const std::vector<double> z = execute(spec, features, params);
        for (int q = 0; q < n; ++q) {
            out[static_cast<std::size_t>(q)][j] = z[static_cast<std::size_t>(q)];
        }
    }
    return out;
}

/// One-sided discrete Fourier coefficients of a real series,
/// c_k = (1/K) sum_j s_j exp(-2 pi i j k / K) for k = 0 .. floor(K/2).
/// With this normalization a unit-amplitude cosine yields |c_1| = 1/2.
inline std::vector<Complex> dft_coefficients(std::span<const double> samples) {
    const std::size_t k_count = samples.size();
    if (k_count < 2) {
        throw std::invalid_argument("dft_coefficients: need at least 2 samples");
    }
    std::vector<Complex> coeffs(k_count / 2 + 1, Complex{0.0, 0.0});
    const double w = -2.0 * std::numbers::pi / static_cast<double>(k_count);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < k_count; ++j) {
            const double phase = w * static_cast<double>(j * k);
            acc += samples[j] * Complex{std::cos(phase), std::sin(phase)};
        }
        coeffs[k] = acc / static_cast<double>(k_count);
    }
    return coeffs;
}

/// Rebuild the real series of length n_samples from its one-sided spectrum.
/// Exact for real inputs (conjugate symmetry supplies the negative ranks).
inline std::vector<double>
reconstruct_from_spectrum(std::span<const Complex> coeffs, int n_samples) {
    if (coeffs.size() != static_cast<std::size_t>(n_samples) / 2 + 1) {
        throw std::invalid_argument(
            "reconstruct_from_spectrum: coefficient count does not match");
    }
    std::vector<double> out(static_cast<std::size_t>(n_samples), 0.0);
    const double w = 2.0 * std::numbers::pi / n_samples;
    const bool even = n_samples % 2 == 0;
    for (int j = 0; j < n_samples; ++j) {
        double v = coeffs[0].real();
        for (std::size_t k = 1; k < coeffs.size(); ++k) {
            const double phase = w * static_cast<double>(j) * static_cast<double>(k);
            const Complex e{std::cos(phase), std::sin(phase)};
            const bool nyquist = even && k == coeffs.size() - 1;
            const double term = (coeffs[k] * e).real();
            v += nyquist ? term : 2.0 * term;
        }
        out[static_cast<std::size_t>(j)] = v;
    }
    return out;
}

/// Spectrum of one weight draw: DC plus the first n_coeffs ranks per qubit.
struct SpectrumSample {
    std::vector<double> weights;
    std::vector<std::vector<Complex>> per_qubit_coefficients;
};

struct FourierSpectrum {
    CircuitSpec spec;
    std::vector<double> input_grid;
    int n_coefficients = 10;
    std::vector<SpectrumSample> samples;
};

/// Sample the circuit's univariate Fourier spectrum over n_weight_draws
/// uniform [0, 2pi) parameter draws. The grid must resolve the requested
/// ranks: grid length >= 2*n_coefficients + 1.
inline FourierSpectrum sample_spectrum(const CircuitSpec& spec,
                                       int n_weight_draws, std::uint64_t seed,
                                       int n_coefficients = 10,
                                       int grid_points = 21) {
    if (n_weight_draws < 1) {
        throw std::invalid_argument("sample_spectrum: need at least 1 draw");
    }
    if (grid_points < 2 * n_coefficients + 1) {
        throw std::invalid_argument(
            "sample_spectrum: grid too short to resolve the requested ranks");
    }
    FourierSpectrum spectrum;
    spectrum.spec = spec;
    spectrum.input_grid = univariate_grid(grid_points);
    spectrum.n_coefficients = n_coefficients;
    spectrum.samples.reserve(static_cast<std::size_t>(n_weight_draws));
    const int n = spec.n_qubits();
    for (int draw = 0; draw < n_weight_draws; ++draw) {
        Rng rng(seed, static_cast<std::uint64_t>(draw));
        SpectrumSample sample;
        sample.weights.resize(static_cast<std::size_t>(spec.n_params()));
        for (double& w : sample.weights) {
            w = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
        const auto outputs =
            univariate_outputs(spec, sample.weights, spectrum.input_grid);
        sample.per_qubit_coefficients.resize(static_cast<std::size_t>(n));
        for (int q = 0; q < n; ++q) {
            auto coeffs = dft_coefficients(outputs[static_cast<std::size_t>(q)]);
            coeffs.resize(static_cast<std::size_t>(n_coefficients) + 1);
            sample.per_qubit_coefficients[static_cast<std::size_t>(q)] =
                std::move(coeffs);
        }
        spectrum.samples.push_back(std::move(sample));
    }
    return spectrum;
}

/// Parameter count of the parallel ansatz vs the degrees of freedom of the
/// Fourier series the circuit can generate.
struct DofReport {
    int local_dimension = 2;    // d: 2 for angle encodings, 4 for higher-order
    int n_qubits = 0;           // M
    int layers = 0;             // L
    long long n_parameters = 0; // (d^(2M) - 1)(L + 1)
    int degree = 0;             // D = (d - 1) L
    long long dof = 0;          // nu = (2D + 1)^M
    bool saturated = false;     // n_parameters >= nu
};

inline DofReport dof_report(const CircuitSpec& spec) {
    if (spec.encoding == Encoding::amplitude) {
        throw std::invalid_argument(
            "dof_report: amplitude encoding has no univariate local dimension");
    }
    DofReport report;
    report.local_dimension = spec.encoding == Encoding::higher_order ? 4 : 2;
    report.n_qubits = spec.n_qubits();
    report.layers = spec.layers;
    const auto ipow = [](long long base, int exp) {
        long long out = 1;
        for (int i = 0; i < exp; ++i) {
            out *= base;
        }
        return out;
    };
    report.n_parameters =
        (ipow(report.local_dimension, 2 * report.n_qubits) - 1) *
        (report.layers + 1);
    report.degree = (report.local_dimension - 1) * report.layers;
    report.dof = ipow(2 * report.degree + 1, report.n_qubits);
    report.saturated = report.n_parameters >= report.dof;
    return report;
}

} // namespace quanv
