// Copyright 2026 The qpatch Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Joint optimization of reducer and classifier parameters: forward pass,
 * summed cross-entropy, exact chain-rule gradients, Nesterov momentum and
 * the training loop with its evaluation cadence.
 */
#pragma once

#include "qpatch/classifier.hpp"
#include "qpatch/data.hpp"
#include "qpatch/reducer.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qpatch {

inline constexpr double kLogClamp = 1e-12;

struct TrainConfig {
    ClassPair classes{0, 1};
    std::size_t epochs = 5;
    std::size_t batch_size = 60;
    double lr_high = 0.01;
    double lr_low = 0.001;
    double lr_switch_acc = 0.90;
    double momentum = 0.9;
    std::size_t eval_every = 20;
    std::uint64_t seed = 0;
    ReducerKind reducer_kind = ReducerKind::Proposed;
    ClassifierKind classifier_kind = ClassifierKind::Quantum;
    SharingPolicy policy{};
    std::size_t patch = 4;
    /// Per-class caps applied when preparing the splits; 0 keeps everything.
    std::size_t train_per_class = 0;
    std::size_t test_per_class = 0;
    /// Evaluate on the first eval_size test samples; 0 uses all of them.
    std::size_t eval_size = 0;

    /// Throws ConfigurationError on out-of-range values.
    void validate() const;

    bool operator==(const TrainConfig &) const = default;
};

/// Reducer circuit plus classifier; trainables are flattened reducer-first.
struct Model {
    BuiltCircuit reducer;
    ClassifierModel classifier;

    [[nodiscard]] std::size_t reducer_trainable() const noexcept {
        return reducer.params.total_trainable();
    }
    [[nodiscard]] std::size_t classifier_trainable() const noexcept {
        return classifier.params().total_trainable();
    }
    [[nodiscard]] std::size_t total_trainable() const noexcept {
        return reducer_trainable() + classifier_trainable();
    }
    [[nodiscard]] std::vector<double> trainable() const;
    void set_trainable(std::span<const double> flat);
};

[[nodiscard]] Model build_model(const TrainConfig &config);

/// Quantum angles uniform on [0, 2 pi); FCC weights Glorot-uniform, biases 0.
void initialize_parameters(Model &model, std::uint64_t seed);

struct ForwardResult {
    ReducedFeatureMatrix features;
    ClassifierOutput output;
};

[[nodiscard]] ForwardResult forward(const PreparedSample &sample, const Model &model);

/// -sum_i y_i log(max(p_i, 1e-12)).
[[nodiscard]] double cross_entropy(std::span<const double> probabilities,
                                   std::span<const double> onehot);

/// Predicted class index; ties go to the lower index.
[[nodiscard]] std::size_t argmax(std::span<const double> values);

struct LossGradient {
    double loss = 0.0;          ///< summed over the batch
    std::vector<double> grad;   ///< flat, reducer first then classifier
};

/// Exact gradient of the summed batch loss, accumulated in sample order.
/// Throws NumericalError if any gradient entry is not finite.
[[nodiscard]] LossGradient compute_gradients(std::span<const PreparedSample> samples,
                                             std::span<const std::size_t> batch,
                                             const Model &model);

[[nodiscard]] LossGradient compute_gradients(std::span<const PreparedSample> samples,
                                             const Model &model);

struct OptimizerState {
    std::vector<double> velocity;
    double learning_rate = 0.0;
    std::size_t iteration = 0;
    double best_accuracy = 0.0;

    bool operator==(const OptimizerState &) const = default;
};

/// theta + momentum * velocity, the point the gradient is evaluated at.
[[nodiscard]] std::vector<double> nesterov_lookahead(std::span<const double> theta,
                                                     const OptimizerState &state,
                                                     double momentum);

/// v <- mu v - lr grad(lookahead); theta <- theta + v.
void nesterov_step(std::span<double> theta, std::span<const double> grad_at_lookahead,
                   OptimizerState &state, double momentum);

struct EvalResult {
    double accuracy = 0.0;
    double mean_loss = 0.0;
    std::size_t n_samples = 0;
};

[[nodiscard]] EvalResult evaluate(const Model &model,
                                  std::span<const PreparedSample> samples);

struct TrainingRecord {
    std::size_t iteration = 0;
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double test_accuracy = 0.0;
    double learning_rate = 0.0;
    double wall_seconds = 0.0;
};

/// Hooks for the caller (checkpointing, logging). All optional.
struct TrainObserver {
    std::function<void(std::size_t iteration, double batch_loss)> on_iteration;
    std::function<void(const TrainingRecord &, const Model &,
                       const OptimizerState &, bool is_best)>
        on_evaluation;
};

struct TrainOptions {
    /// When false the wall_seconds column is written as 0.
    bool record_wall_time = true;
};

struct TrainResult {
    Model model;
    Model best_model;
    OptimizerState optimizer;
    std::vector<TrainingRecord> records;
};

/// Iterations per run: epochs * floor(train size / batch size).
[[nodiscard]] std::size_t planned_iterations(const TrainConfig &config,
                                             std::size_t train_size);

/**
 * @brief Runs the joint optimization.
 *
 * Test accuracy is evaluated every `eval_every` iterations and after the
 * last one. The learning rate drops from lr_high to lr_low for good at the
 * first evaluation reaching lr_switch_acc.
 */
[[nodiscard]] TrainResult train_loop(const TrainConfig &config,
                                     std::span<const PreparedSample> train,
                                     std::span<const PreparedSample> test,
                                     const TrainObserver &observer = {},
                                     const TrainOptions &options = {});

} // namespace qpatch
