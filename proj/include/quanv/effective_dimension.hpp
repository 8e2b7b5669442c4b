#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "quanv/circuit.hpp"
#include "quanv/metrics.hpp"
#include "quanv/rng.hpp"

namespace quanv {

/// A parameterized classifier seen as a conditional distribution p(y|x;theta).
/// The default jacobian falls back to central finite differences; models with
/// exact gradients override it.
class ProbabilisticModel {
  public:
    virtual ~ProbabilisticModel() = default;

    virtual int parameter_count() const = 0;
    virtual int class_count() const = 0;
    /// 0 means the model ignores its input.
    virtual int input_dim() const = 0;

    virtual std::vector<double>
    class_probabilities(std::span<const double> x,
                        std::span<const double> theta) const = 0;

    /// d p(y|x;theta) / d theta, row per class, column per parameter.
    virtual Eigen::MatrixXd
    probability_jacobian(std::span<const double> x,
                         std::span<const double> theta) const {
        const int d = parameter_count();
        Eigen::MatrixXd jac(class_count(), d);
        std::vector<double> shifted(theta.begin(), theta.end());
        const double h = 1e-6;
        for (int k = 0; k < d; ++k) {
            shifted[static_cast<std::size_t>(k)] = theta[k] + h;
            const std::vector<double> plus = class_probabilities(x, shifted);
            shifted[static_cast<std::size_t>(k)] = theta[k] - h;
            const std::vector<double> minus = class_probabilities(x, shifted);
            shifted[static_cast<std::size_t>(k)] = theta[k];
            for (int y = 0; y < class_count(); ++y) {
                jac(y, k) = (plus[static_cast<std::size_t>(y)] -
                             minus[static_cast<std::size_t>(y)]) /
                            (2.0 * h);
            }
        }
        return jac;
    }
};

/// The quantum layer of the hybrid classifier with a probability readout
/// head: p(y|x;theta) is the Born distribution over computational basis
/// outcomes of the executed circuit. Probability gradients are exact via the
/// two-point parameter-shift rule.
class QuantumLayerModel final : public ProbabilisticModel {
  public:
    explicit QuantumLayerModel(CircuitSpec spec) : spec_(spec) {
        spec_.validate();
    }

    const CircuitSpec& spec() const { return spec_; }
    int parameter_count() const override { return spec_.n_params(); }
    int class_count() const override {
        return 1 << spec_.n_qubits();
    }
    int input_dim() const override { return spec_.n_features; }

    std::vector<double>
    class_probabilities(std::span<const double> x,
                        std::span<const double> theta) const override {
        return probabilities(execute_state(spec_, x, theta));
    }

    Eigen::MatrixXd
    probability_jacobian(std::span<const double> x,
                         std::span<const double> theta) const override {
        const int d = parameter_count();
        Eigen::MatrixXd jac(class_count(), d);
        std::vector<double> shifted(theta.begin(), theta.end());
        for (int k = 0; k < d; ++k) {
            const double original = shifted[static_cast<std::size_t>(k)];
            shifted[static_cast<std::size_t>(k)] = original + std::numbers::pi / 2.0;
            const std::vector<double> plus = class_probabilities(x, shifted);
            shifted[static_cast<std::size_t>(k)] = original - std::numbers::pi / 2.0;
            const std::vector<double> minus = class_probabilities(x, shifted);
            shifted[static_cast<std::size_t>(k)] = original;
            for (int y = 0; y < class_count(); ++y) {
                jac(y, k) = 0.5 * (plus[static_cast<std::size_t>(y)] -
                                   minus[static_cast<std::size_t>(y)]);
            }
        }
        return jac;
    }

  private:
    CircuitSpec spec_;
};

/// Monte-Carlo Fisher information at theta: inputs uniform in [-1,1]^dim,
/// labels drawn from the model's own predictive distribution, score
/// outer-products averaged over n_samples. Symmetric PSD by construction.
/// Predicted probabilities are clamped at 1e-12 before the logarithm.
inline Eigen::MatrixXd fisher_information(const ProbabilisticModel& model,
                                          std::span<const double> theta,
                                          int n_samples, Rng& rng) {
    if (n_samples < 1) {
        throw std::invalid_argument("fisher_information: n_samples must be >= 1");
    }
    const int d = model.parameter_count();
    Eigen::MatrixXd fim = Eigen::MatrixXd::Zero(d, d);
    std::vector<double> x(static_cast<std::size_t>(model.input_dim()));
    for (int sample = 0; sample < n_samples; ++sample) {
        for (double& xi : x) {
            xi = rng.uniform(-1.0, 1.0);
        }
        const std::vector<double> probs = model.class_probabilities(x, theta);
        const Eigen::MatrixXd jac = model.probability_jacobian(x, theta);
        // y ~ p(.|x;theta)
        double u = rng.uniform();
        int y = 0;
        for (std::size_t c = 0; c + 1 < probs.size(); ++c) {
            u -= probs[c];
            if (u < 0.0) {
                y = static_cast<int>(c);
                break;
            }
            y = static_cast<int>(c + 1);
        }
        const double p = std::max(probs[static_cast<std::size_t>(y)], 1e-12);
        const Eigen::VectorXd score = jac.row(y).transpose() / p;
        fim.noalias() += score * score.transpose();
    }
    return fim / static_cast<double>(n_samples);
}

/// Effective dimension of the model divided by its parameter count.
///
/// The Fisher matrices of n_theta_samples uniform theta draws in [0, 2pi)^d
/// are trace-normalized so the average normalized trace equals d, then
///   d_eff = 2 log( mean_theta sqrt(det(I + kappa Fhat)) ) / log(kappa)
/// with kappa = gamma n / (2 pi log n). A model whose Fisher information
/// vanishes everywhere has d_eff = 0.
inline double normalized_effective_dimension(const ProbabilisticModel& model,
                                             const MetricsConfig& config) {
    config.validate();
    const int d = model.parameter_count();
    const double n = config.n_effective;
    const double kappa = config.gamma * n / (2.0 * std::numbers::pi * std::log(n));
    if (!(kappa > 1.0)) {
        throw std::invalid_argument(
            "normalized_effective_dimension: gamma*n/(2 pi log n) must exceed 1");
    }
    std::vector<Eigen::MatrixXd> fims;
    fims.reserve(static_cast<std::size_t>(config.n_theta_samples));
    double trace_sum = 0.0;
    std::vector<double> theta(static_cast<std::size_t>(d));
    for (int j = 0; j < config.n_theta_samples; ++j) {
        Rng rng(config.seed, 0x20000000ULL + static_cast<std::uint64_t>(j));
        for (double& t : theta) {
            t = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
        fims.push_back(
            fisher_information(model, theta, config.n_data_samples, rng));
        trace_sum += fims.back().trace();
    }
    const double mean_trace = trace_sum / config.n_theta_samples;
    if (mean_trace < 1e-18) {
        return 0.0; // theta-independent model
    }
    const double norm_factor = static_cast<double>(d) / mean_trace;
    // log of sqrt(det(I + kappa Fhat)) per draw, averaged via log-sum-exp
    std::vector<double> half_logdets;
    half_logdets.reserve(fims.size());
    for (std::size_t j = 0; j < fims.size(); ++j) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d) +
                            kappa * norm_factor * fims[j];
        const Eigen::LLT<Eigen::MatrixXd> llt(m);
        if (llt.info() != Eigen::Success) {
            throw std::runtime_error(
                "normalized_effective_dimension: non-finite determinant at "
                "theta draw " +
                std::to_string(j));
        }
        double half_logdet = 0.0;
        for (int r = 0; r < d; ++r) {
            half_logdet += std::log(llt.matrixL()(r, r));
        }
        if (!std::isfinite(half_logdet)) {
            throw std::runtime_error(
                "normalized_effective_dimension: non-finite determinant at "
                "theta draw " +
                std::to_string(j));
        }
        half_logdets.push_back(half_logdet);
    }
    const double peak = *std::max_element(half_logdets.begin(), half_logdets.end());
    double acc = 0.0;
    for (const double v : half_logdets) {
        acc += std::exp(v - peak);
    }
    const double log_mean =
        peak + std::log(acc / static_cast<double>(half_logdets.size()));
    const double d_eff = 2.0 * log_mean / std::log(kappa);
    return d_eff / static_cast<double>(d);
}

/// All three metrics for one circuit.
inline MetricsReport compute_metrics(const CircuitSpec& spec,
                                     const MetricsConfig& config) {
    MetricsReport report;
    report.spec = spec;
    report.config = config;
    report.expressibility = expressibility(spec, config);
    report.entanglement = entanglement_capability(spec, config);
    report.normalized_effective_dimension =
        normalized_effective_dimension(QuantumLayerModel(spec), config);
    return report;
}

} // namespace quanv
