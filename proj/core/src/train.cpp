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
#include "qpatch/train.hpp"

#include "qpatch/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

namespace qpatch {
namespace {

/// Decorrelates the batch stream from the initialization stream.
constexpr std::uint64_t kBatchSeedOffset = 0x9E3779B97F4A7C15ULL;

void check_finite(std::span<const double> g) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!std::isfinite(g[i])) {
            throw NumericalError("non-finite gradient entry at flat index " +
                                 std::to_string(i));
        }
    }
}

} // namespace

void TrainConfig::validate() const {
    if (classes.first == classes.second || classes.first < 0 ||
        classes.first > 9 || classes.second < 0 || classes.second > 9) {
        throw ConfigurationError("classes must be two distinct ids in 0-9");
    }
    if (!(lr_low > 0.0) || !(lr_low <= lr_high)) {
        throw ConfigurationError("learning rates must satisfy 0 < lr_low <= lr_high");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) {
        throw ConfigurationError("momentum must lie in [0, 1)");
    }
    if (batch_size == 0) {
        throw ConfigurationError("batch size must be at least 1");
    }
    if (eval_every == 0) {
        throw ConfigurationError("eval_every must be at least 1");
    }
    if (epochs == 0) {
        throw ConfigurationError("epochs must be at least 1");
    }
}

std::vector<double> Model::trainable() const {
    std::vector<double> flat = reducer.params.trainable_values();
    const auto c = classifier.params().trainable_values();
    flat.insert(flat.end(), c.begin(), c.end());
    return flat;
}

void Model::set_trainable(std::span<const double> flat) {
    if (flat.size() != total_trainable()) {
        throw ContractError("trainable vector size mismatch");
    }
    reducer.params.set_trainable_values(flat.first(reducer_trainable()));
    classifier.params().set_trainable_values(flat.subspan(reducer_trainable()));
}

Model build_model(const TrainConfig &config) {
    Model m{build_reducer(config.reducer_kind, config.patch, config.policy),
            config.classifier_kind == ClassifierKind::Quantum
                ? ClassifierModel::quantum(config.policy)
                : ClassifierModel::fcc()};
    return m;
}

void initialize_parameters(Model &model, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    auto init_angles = [&](ParameterSet &p) {
        for (std::size_t g = 0; g < p.group_count(); ++g) {
            auto &grp = p.group(g);
            if (!grp.trainable) {
                continue;
            }
            for (auto &v : grp.values) {
                v = angle(rng);
            }
        }
    };
    init_angles(model.reducer.params);
    if (model.classifier.kind() == ClassifierKind::Quantum) {
        init_angles(model.classifier.params());
        return;
    }
    auto &p = model.classifier.params();
    for (std::size_t layer = 0; layer + 1 < kFccWidths.size(); ++layer) {
        const double fan = static_cast<double>(kFccWidths[layer] + kFccWidths[layer + 1]);
        std::uniform_real_distribution<double> w(-std::sqrt(6.0 / fan),
                                                 std::sqrt(6.0 / fan));
        for (auto &v : p.group(2 * layer).values) {
            v = w(rng);
        }
        auto &b = p.group(2 * layer + 1).values;
        std::fill(b.begin(), b.end(), 0.0);
    }
}

ForwardResult forward(const PreparedSample &sample, const Model &model) {
    ForwardResult r;
    r.features = reduce_image(sample.image, model.reducer.circuit,
                              model.reducer.params);
    r.output = model.classifier.forward(r.features.gamma);
    return r;
}

double cross_entropy(std::span<const double> probabilities,
                     std::span<const double> onehot) {
    if (probabilities.size() != onehot.size()) {
        throw ContractError("probability/label length mismatch");
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < onehot.size(); ++i) {
        if (onehot[i] != 0.0) {
            loss -= onehot[i] * std::log(std::max(probabilities[i], kLogClamp));
        }
    }
    return loss;
}

std::size_t argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) {
            best = i;
        }
    }
    return best;
}

LossGradient compute_gradients(std::span<const PreparedSample> samples,
                               std::span<const std::size_t> batch,
                               const Model &model) {
    if (batch.empty()) {
        throw ContractError("gradient of an empty batch");
    }
    const std::size_t n_r = model.reducer_trainable();
    const std::size_t n_c = model.classifier_trainable();
    LossGradient out;
    out.grad.assign(n_r + n_c, 0.0);

    for (std::size_t idx : batch) {
        const PreparedSample &s = samples[idx];
        const ReducedWithGrads red = reduce_image_with_grads(
            s.image, model.reducer.circuit, model.reducer.params);
        const ClassifierGrads cls = model.classifier.forward_with_grads(red.features.gamma);
        const auto &p = cls.output.probabilities;
        out.loss += cross_entropy(p, s.label_onehot);

        // dL/dp, zero where the log clamp is active
        std::vector<double> dl_dp(p.size(), 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (s.label_onehot[i] != 0.0 && p[i] > kLogClamp) {
                dl_dp[i] = -s.label_onehot[i] / p[i];
            }
        }
        const Matrix jac = softmax_jacobian(p);
        std::vector<double> dl_ds(p.size(), 0.0);
        for (std::size_t j = 0; j < p.size(); ++j) {
            for (std::size_t i = 0; i < p.size(); ++i) {
                dl_ds[j] += dl_dp[i] * jac(i, j);
            }
        }

        for (std::size_t k = 0; k < dl_ds.size(); ++k) {
            const auto row = cls.score_params.row(k);
            for (std::size_t j = 0; j < n_c; ++j) {
                out.grad[n_r + j] += dl_ds[k] * row[j];
            }
        }
        const std::size_t n_feat = cls.score_inputs.cols();
        for (std::size_t f = 0; f < n_feat; ++f) {
            double dl_dgamma = 0.0;
            for (std::size_t k = 0; k < dl_ds.size(); ++k) {
                dl_dgamma += dl_ds[k] * cls.score_inputs(k, f);
            }
            if (dl_dgamma == 0.0) {
                continue;
            }
            const auto row = red.gamma_grad.row(f);
            for (std::size_t j = 0; j < n_r; ++j) {
                out.grad[j] += dl_dgamma * row[j];
            }
        }
    }
    check_finite(out.grad);
    return out;
}

LossGradient compute_gradients(std::span<const PreparedSample> samples,
                               const Model &model) {
    std::vector<std::size_t> all(samples.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
    }
    return compute_gradients(samples, all, model);
}

std::vector<double> nesterov_lookahead(std::span<const double> theta,
                                       const OptimizerState &state,
                                       double momentum) {
    if (theta.size() != state.velocity.size()) {
        throw ContractError("velocity shape does not match parameters");
    }
    std::vector<double> look(theta.begin(), theta.end());
    for (std::size_t i = 0; i < look.size(); ++i) {
        look[i] += momentum * state.velocity[i];
    }
    return look;
}

void nesterov_step(std::span<double> theta, std::span<const double> grad_at_lookahead,
                   OptimizerState &state, double momentum) {
    if (theta.size() != state.velocity.size() ||
        grad_at_lookahead.size() != theta.size()) {
        throw ContractError("optimizer shape mismatch: " +
                            std::to_string(theta.size()) + " parameters, " +
                            std::to_string(grad_at_lookahead.size()) +
                            " gradient entries, " +
                            std::to_string(state.velocity.size()) +
                            " velocity entries");
    }
    for (std::size_t i = 0; i < theta.size(); ++i) {
        state.velocity[i] = momentum * state.velocity[i] -
                            state.learning_rate * grad_at_lookahead[i];
        theta[i] += state.velocity[i];
    }
    ++state.iteration;
}

EvalResult evaluate(const Model &model, std::span<const PreparedSample> samples) {
    if (samples.empty()) {
        throw ContractError("evaluation on an empty sample set");
    }
    std::size_t correct = 0;
    double loss = 0.0;
    for (const auto &s : samples) {
        const ForwardResult r = forward(s, model);
        loss += cross_entropy(r.output.probabilities, s.label_onehot);
        if (argmax(r.output.probabilities) == s.label_index()) {
            ++correct;
        }
    }
    const auto n = static_cast<double>(samples.size());
    return {static_cast<double>(correct) / n, loss / n, samples.size()};
}

std::size_t planned_iterations(const TrainConfig &config, std::size_t train_size) {
    return config.epochs * (train_size / config.batch_size);
}

TrainResult train_loop(const TrainConfig &config,
                       std::span<const PreparedSample> train,
                       std::span<const PreparedSample> test,
                       const TrainObserver &observer,
                       const TrainOptions &options) {
    config.validate();
    if (test.empty()) {
        throw DataError("empty test set");
    }
    Model model = build_model(config);
    initialize_parameters(model, config.seed);

    BatchIterator batches(train.size(), config.batch_size,
                          config.seed + kBatchSeedOffset);
    const std::size_t per_epoch = batches.batches_per_epoch();
    const std::size_t total = config.epochs * per_epoch;
    const auto eval_set =
        config.eval_size == 0 ? test : test.first(std::min(config.eval_size, test.size()));

    std::vector<double> theta = model.trainable();
    OptimizerState opt;
    opt.velocity.assign(theta.size(), 0.0);
    opt.learning_rate = config.lr_high;
    opt.best_accuracy = -1.0;

    TrainResult result{model, model, {}, {}};
    const auto start = std::chrono::steady_clock::now();

    for (std::size_t it = 1; it <= total; ++it) {
        const std::vector<std::size_t> batch = batches.next();
        model.set_trainable(nesterov_lookahead(theta, opt, config.momentum));
        const LossGradient g = compute_gradients(train, batch, model);
        nesterov_step(theta, g.grad, opt, config.momentum);
        model.set_trainable(theta);
        if (observer.on_iteration) {
            observer.on_iteration(it, g.loss);
        }

        if (it % config.eval_every != 0 && it != total) {
            continue;
        }
        const EvalResult ev = evaluate(model, eval_set);
        if (opt.learning_rate == config.lr_high && ev.accuracy >= config.lr_switch_acc) {
            opt.learning_rate = config.lr_low;
        }
        const bool is_best = ev.accuracy > opt.best_accuracy;
        if (is_best) {
            opt.best_accuracy = ev.accuracy;
            result.best_model = model;
        }
        TrainingRecord rec;
        rec.iteration = it;
        rec.epoch = (it - 1) / per_epoch + 1;
        rec.train_loss = g.loss;
        rec.test_accuracy = ev.accuracy;
        rec.learning_rate = opt.learning_rate;
        if (options.record_wall_time) {
            rec.wall_seconds = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
        }
        result.records.push_back(rec);
        if (observer.on_evaluation) {
            observer.on_evaluation(rec, model, opt, is_best);
        }
    }

    result.model = std::move(model);
    result.optimizer = std::move(opt);
    return result;
}

} // namespace qpatch
