#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "quanv/circuit.hpp"
#include "quanv/dataset.hpp"
#include "quanv/rng.hpp"

namespace quanv {

/// Quantum feature maps of one image: one channel per qubit, one spatial
/// cell per filter window.
struct FeatureTensor {
    int channels = 0;
    int out_h = 0;
    int out_w = 0;
    std::vector<double> values; // [channel][row][col] flattened

    double& at(int c, int i, int j) {
        return values[(static_cast<std::size_t>(c) * out_h + i) * out_w + j];
    }
    double at(int c, int i, int j) const {
        return values[(static_cast<std::size_t>(c) * out_h + i) * out_w + j];
    }
    std::size_t size() const { return values.size(); }
};

/// Hybrid classifier: one VQC filter slid over the image, channels fed to a
/// dense head (sigmoid for two classes, softmax otherwise).
struct HybridModel {
    CircuitSpec spec;
    ParamVector quantum_params;
    std::vector<std::vector<double>> head_weights; // [out][feature]
    std::vector<double> head_bias;
    int stride = 2;
    int n_classes = 2;
    int image_h = 0;
    int image_w = 0;

    bool binary() const { return n_classes == 2; }
    int head_outputs() const { return binary() ? 1 : n_classes; }

    int out_h() const { return (image_h - 2) / stride + 1; }
    int out_w() const { return (image_w - 2) / stride + 1; }
    int feature_count() const { return spec.n_qubits() * out_h() * out_w(); }

    /// Head weights uniform in [-s, s] with s = 1/sqrt(fan_in); quantum
    /// parameters uniform in [0, 2pi).
    static HybridModel initialize(const CircuitSpec& spec, int image_h,
                                  int image_w, int n_classes, int stride,
                                  Rng& rng) {
        if (image_h < 2 || image_w < 2) {
            throw std::invalid_argument("HybridModel: image smaller than filter");
        }
        if (spec.n_features != 4) {
            throw std::invalid_argument(
                "HybridModel: the 2x2 filter feeds 4 features per window");
        }
        HybridModel model;
        model.spec = spec;
        model.stride = stride;
        model.n_classes = n_classes;
        model.image_h = image_h;
        model.image_w = image_w;
        model.quantum_params.resize(static_cast<std::size_t>(spec.n_params()));
        for (double& t : model.quantum_params) {
            t = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
        const int fan_in = model.feature_count();
        const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
        model.head_weights.assign(
            static_cast<std::size_t>(model.head_outputs()),
            std::vector<double>(static_cast<std::size_t>(fan_in), 0.0));
        model.head_bias.assign(static_cast<std::size_t>(model.head_outputs()), 0.0);
        for (auto& row : model.head_weights) {
            for (double& w : row) {
                w = rng.uniform(-s, s);
            }
        }
        return model;
    }
};

namespace detail {

inline std::array<double, 4> window_features(const Image& image, int r, int c) {
    return {image.at(r, c), image.at(r, c + 1), image.at(r + 1, c),
            image.at(r + 1, c + 1)};
}

} // namespace detail

/// Slide the VQC filter over all 2x2 windows (row-major, given stride) and
/// map each qubit's <Z> onto its output channel.
inline FeatureTensor quantum_convolve(const HybridModel& model,
                                      const Image& image) {
    if (image.height < 2 || image.width < 2) {
        throw std::invalid_argument("quantum_convolve: image smaller than filter");
    }
    FeatureTensor features;
    features.channels = model.spec.n_qubits();
    features.out_h = (image.height - 2) / model.stride + 1;
    features.out_w = (image.width - 2) / model.stride + 1;
    features.values.assign(static_cast<std::size_t>(features.channels) *
                               features.out_h * features.out_w,
                           0.0);
    for (int i = 0; i < features.out_h; ++i) {
        for (int j = 0; j < features.out_w; ++j) {
            const auto x = detail::window_features(image, i * model.stride,
                                                   j * model.stride);
            const std::vector<double> z =
                execute(model.spec, x, model.quantum_params);
            for (int c = 0; c < features.channels; ++c) {
                features.at(c, i, j) = z[static_cast<std::size_t>(c)];
            }
        }
    }
    return features;
}

namespace detail {

inline std::vector<double> head_logits(const HybridModel& model,
                                       std::span<const double> features) {
    if (static_cast<int>(features.size()) != model.feature_count()) {
        throw std::invalid_argument("head_logits: feature count mismatch");
    }
    std::vector<double> logits(static_cast<std::size_t>(model.head_outputs()));
    for (std::size_t o = 0; o < logits.size(); ++o) {
        double z = model.head_bias[o];
        const auto& row = model.head_weights[o];
        for (std::size_t k = 0; k < row.size(); ++k) {
            z += row[k] * features[k];
        }
        logits[o] = z;
    }
    return logits;
}

inline std::vector<double> softmax(std::span<const double> logits) {
    const double peak = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::exp(logits[i] - peak);
        sum += p[i];
    }
    for (double& v : p) {
        v /= sum;
    }
    return p;
}

} // namespace detail

/// Class probabilities for one image: quantum convolution, flatten, dense
/// head, sigmoid (binary) or softmax (multi-class).
inline std::vector<double> forward(const HybridModel& model, const Image& image) {
    const FeatureTensor features = quantum_convolve(model, image);
    const std::vector<double> logits = detail::head_logits(model, features.values);
    if (model.binary()) {
        const double p1 = 1.0 / (1.0 + std::exp(-logits[0]));
        return {1.0 - p1, p1};
    }
    return detail::softmax(logits);
}

/// Exact Jacobian of the circuit's per-qubit <Z> with respect to every
/// trainable angle, via the two-point parameter-shift rule
/// (g(theta + pi/2) - g(theta - pi/2)) / 2.
inline std::vector<std::vector<double>>
quantum_gradient(const CircuitSpec& spec, std::span<const double> features,
                 std::span<const double> params) {
    const int n = spec.n_qubits();
    const int d = spec.n_params();
    std::vector<std::vector<double>> jac(
        static_cast<std::size_t>(n),
        std::vector<double>(static_cast<std::size_t>(d), 0.0));
    std::vector<double> shifted(params.begin(), params.end());
    for (int k = 0; k < d; ++k) {
        const double original = shifted[static_cast<std::size_t>(k)];
        shifted[static_cast<std::size_t>(k)] = original + std::numbers::pi / 2.0;
        const std::vector<double> plus = execute(spec, features, shifted);
        shifted[static_cast<std::size_t>(k)] = original - std::numbers::pi / 2.0;
        const std::vector<double> minus = execute(spec, features, shifted);
        shifted[static_cast<std::size_t>(k)] = original;
        for (int q = 0; q < n; ++q) {
            jac[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] =
                0.5 * (plus[static_cast<std::size_t>(q)] -
                       minus[static_cast<std::size_t>(q)]);
        }
    }
    return jac;
}

enum class OptimizerKind { gradient_descent, momentum };

struct TrainConfig {
    int epochs = 20;
    double learning_rate = 0.01;
    int batch_size = 16;
    OptimizerKind optimizer = OptimizerKind::momentum;
    double momentum = 0.9;
    double scaling = std::numbers::pi / 4.0;
    std::uint64_t seed = 1;

    void validate() const {
        if (epochs < 1) {
            throw std::invalid_argument("TrainConfig: epochs must be >= 1");
        }
        if (learning_rate < 0.0) {
            throw std::invalid_argument("TrainConfig: learning rate must be >= 0");
        }
        if (batch_size < 1) {
            throw std::invalid_argument("TrainConfig: batch size must be >= 1");
        }
    }
};

struct EpochStats {
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;
};

struct TrainLog {
    std::vector<EpochStats> epochs;
    int best_epoch = 0; // by validation accuracy
    double best_train_accuracy = 0.0;
    double best_val_accuracy = 0.0;
    double wall_seconds = 0.0;
};

namespace detail {

struct LossAndGrad {
    double loss = 0.0;
    int predicted = 0;
    std::vector<double> logit_grad; // dLoss/dlogit per head output
};

/// Cross-entropy (binary cross-entropy for two classes) and its logit
/// gradient; probabilities floor at 1e-12 inside the log.
inline LossAndGrad loss_and_logit_grad(const HybridModel& model,
                                       std::span<const double> logits,
                                       int label) {
    LossAndGrad out;
    if (model.binary()) {
        const double p1 = 1.0 / (1.0 + std::exp(-logits[0]));
        const double p = label == 1 ? p1 : 1.0 - p1;
        out.loss = -std::log(std::max(p, 1e-12));
        out.predicted = p1 >= 0.5 ? 1 : 0;
        out.logit_grad = {p1 - (label == 1 ? 1.0 : 0.0)};
        return out;
    }
    const std::vector<double> p = softmax(logits);
    out.loss = -std::log(std::max(p[static_cast<std::size_t>(label)], 1e-12));
    out.predicted = static_cast<int>(
        std::max_element(p.begin(), p.end()) - p.begin());
    out.logit_grad.resize(p.size());
    for (std::size_t c = 0; c < p.size(); ++c) {
        out.logit_grad[c] = p[c] - (static_cast<int>(c) == label ? 1.0 : 0.0);
    }
    return out;
}

struct Gradients {
    std::vector<std::vector<double>> head_weights;
    std::vector<double> head_bias;
    std::vector<double> quantum;

    explicit Gradients(const HybridModel& model)
        : head_weights(model.head_weights.size(),
                       std::vector<double>(model.head_weights[0].size(), 0.0)),
          head_bias(model.head_bias.size(), 0.0),
          quantum(model.quantum_params.size(), 0.0) {}

    void add_sample(const HybridModel& model, const Image& image, int label,
                    double& loss_out, int& correct_out) {
        const FeatureTensor features = quantum_convolve(model, image);
        const std::vector<double> logits = head_logits(model, features.values);
        const LossAndGrad lg = loss_and_logit_grad(model, logits, label);
        loss_out += lg.loss;
        correct_out += lg.predicted == label ? 1 : 0;
        // head gradients
        std::vector<double> feature_grad(features.size(), 0.0);
        for (std::size_t o = 0; o < lg.logit_grad.size(); ++o) {
            head_bias[o] += lg.logit_grad[o];
            for (std::size_t k = 0; k < feature_grad.size(); ++k) {
                head_weights[o][k] += lg.logit_grad[o] * features.values[k];
                feature_grad[k] += lg.logit_grad[o] * model.head_weights[o][k];
            }
        }
        // chain through every window's parameter-shift Jacobian
        const int channels = features.channels;
        for (int i = 0; i < features.out_h; ++i) {
            for (int j = 0; j < features.out_w; ++j) {
                const auto x =
                    window_features(image, i * model.stride, j * model.stride);
                const auto jac =
                    quantum_gradient(model.spec, x, model.quantum_params);
                for (int c = 0; c < channels; ++c) {
                    const double g = feature_grad[(static_cast<std::size_t>(c) *
                                                       features.out_h +
                                                   i) *
                                                      features.out_w +
                                                  j];
                    if (g == 0.0) {
                        continue;
                    }
                    for (std::size_t k = 0; k < quantum.size(); ++k) {
                        quantum[k] += g * jac[static_cast<std::size_t>(c)][k];
                    }
                }
            }
        }
    }

    void scale(double factor) {
        for (auto& row : head_weights) {
            for (double& v : row) {
                v *= factor;
            }
        }
        for (double& v : head_bias) {
            v *= factor;
        }
        for (double& v : quantum) {
            v *= factor;
        }
    }
};

inline void evaluate(const HybridModel& model,
                     const std::vector<Image>& images,
                     const std::vector<int>& labels, double& loss_out,
                     double& accuracy_out) {
    double loss = 0.0;
    int correct = 0;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const FeatureTensor features = quantum_convolve(model, images[i]);
        const std::vector<double> logits = head_logits(model, features.values);
        const LossAndGrad lg = loss_and_logit_grad(model, logits, labels[i]);
        loss += lg.loss;
        correct += lg.predicted == labels[i] ? 1 : 0;
    }
    loss_out = loss / static_cast<double>(images.size());
    accuracy_out = static_cast<double>(correct) / static_cast<double>(images.size());
}

} // namespace detail

/// Mini-batch gradient descent on the hybrid model. Deterministic in
/// config.seed: shuffling, and nothing else, consumes randomness here.
/// Throws on non-finite loss, naming the offending epoch.
inline TrainLog train(HybridModel& model, const Dataset& dataset,
                      const TrainConfig& config) {
    config.validate();
    if (dataset.train_images.empty() || dataset.val_images.empty()) {
        throw std::invalid_argument("train: dataset split is empty");
    }
    const auto t0 = std::chrono::steady_clock::now();
    TrainLog log;
    detail::Gradients velocity(model);
    std::vector<std::size_t> order(dataset.train_images.size());
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(config.seed, 0x5f5f5f5fULL);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        // Fisher-Yates with the run's private stream
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[shuffle_rng.integer(i)]);
        }
        double epoch_loss = 0.0;
        int epoch_correct = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end = std::min(
                start + static_cast<std::size_t>(config.batch_size), order.size());
            detail::Gradients grad(model);
            double batch_loss = 0.0;
            int batch_correct = 0;
            for (std::size_t i = start; i < end; ++i) {
                grad.add_sample(model, dataset.train_images[order[i]],
                                dataset.train_labels[order[i]], batch_loss,
                                batch_correct);
            }
            epoch_loss += batch_loss;
            epoch_correct += batch_correct;
            grad.scale(1.0 / static_cast<double>(end - start));
            const double lr = config.learning_rate;
            if (config.optimizer == OptimizerKind::momentum) {
                const double mu = config.momentum;
                for (std::size_t o = 0; o < grad.head_weights.size(); ++o) {
                    for (std::size_t k = 0; k < grad.head_weights[o].size(); ++k) {
                        velocity.head_weights[o][k] =
                            mu * velocity.head_weights[o][k] -
                            lr * grad.head_weights[o][k];
                        model.head_weights[o][k] += velocity.head_weights[o][k];
                    }
                    velocity.head_bias[o] =
                        mu * velocity.head_bias[o] - lr * grad.head_bias[o];
                    model.head_bias[o] += velocity.head_bias[o];
                }
                for (std::size_t k = 0; k < grad.quantum.size(); ++k) {
                    velocity.quantum[k] =
                        mu * velocity.quantum[k] - lr * grad.quantum[k];
                    model.quantum_params[k] += velocity.quantum[k];
                }
            } else {
                for (std::size_t o = 0; o < grad.head_weights.size(); ++o) {
                    for (std::size_t k = 0; k < grad.head_weights[o].size(); ++k) {
                        model.head_weights[o][k] -= lr * grad.head_weights[o][k];
                    }
                    model.head_bias[o] -= lr * grad.head_bias[o];
                }
                for (std::size_t k = 0; k < grad.quantum.size(); ++k) {
                    model.quantum_params[k] -= lr * grad.quantum[k];
                }
            }
        }
        EpochStats stats;
        stats.train_loss =
            epoch_loss / static_cast<double>(dataset.train_images.size());
        stats.train_accuracy = static_cast<double>(epoch_correct) /
                               static_cast<double>(dataset.train_images.size());
        detail::evaluate(model, dataset.val_images, dataset.val_labels,
                         stats.val_loss, stats.val_accuracy);
        if (!std::isfinite(stats.train_loss) || !std::isfinite(stats.val_loss)) {
            throw std::runtime_error("train: loss diverged at epoch " +
                                     std::to_string(epoch + 1));
        }
        log.epochs.push_back(stats);
        if (stats.val_accuracy > log.best_val_accuracy) {
            log.best_val_accuracy = stats.val_accuracy;
            log.best_epoch = epoch;
        }
        log.best_train_accuracy =
            std::max(log.best_train_accuracy, stats.train_accuracy);
    }
    log.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return log;
}

} // namespace quanv
