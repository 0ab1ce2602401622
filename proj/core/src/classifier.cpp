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
#include "qpatch/classifier.hpp"

#include "qpatch/error.hpp"
#include "qpatch/statevec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace qpatch {
namespace {

bool all_zero(const Matrix &m) {
    return std::all_of(m.data().begin(), m.data().end(),
                       [](double v) { return v == 0.0; });
}

/// Views FCC groups as layer weights and biases.
struct FccView {
    const ParameterSet &params;

    [[nodiscard]] std::span<const double> weights(std::size_t layer) const {
        return params.group(2 * layer).values;
    }
    [[nodiscard]] std::span<const double> bias(std::size_t layer) const {
        return params.group(2 * layer + 1).values;
    }
};

void check_fcc(const Matrix &gamma, const ParameterSet &params) {
    if (gamma.size() != kFccInputs) {
        throw InvalidInputError("FCC expects 64 features, got " +
                                std::to_string(gamma.size()));
    }
    if (params.group_count() != 6 || params.total_size() != 566) {
        throw ConfigurationError("parameter set is not an FCC layout");
    }
}

/// Unit-RMS copy of gamma, the input layer of the FCC; returns the L2 norm.
double fcc_input(const Matrix &gamma, std::vector<double> &x) {
    double n2 = 0.0;
    for (double v : gamma.data()) {
        n2 += v * v;
    }
    if (n2 == 0.0) {
        throw DegenerateInputError("FCC input is identically zero");
    }
    const double norm = std::sqrt(n2);
    x.resize(kFccInputs);
    for (std::size_t i = 0; i < kFccInputs; ++i) {
        x[i] = kFccInputScale * gamma.data()[i] / norm;
    }
    return norm;
}

} // namespace

std::vector<double> softmax(std::span<const double> x) {
    if (x.empty()) {
        return {};
    }
    const double mx = *std::max_element(x.begin(), x.end());
    std::vector<double> p(x.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        p[i] = std::exp(x[i] - mx);
        sum += p[i];
    }
    for (auto &v : p) {
        v /= sum;
    }
    return p;
}

Matrix softmax_jacobian(std::span<const double> probabilities) {
    const std::size_t n = probabilities.size();
    Matrix j(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            j(a, b) = probabilities[a] * ((a == b ? 1.0 : 0.0) - probabilities[b]);
        }
    }
    return j;
}

BuiltCircuit build_classifier_circuit(std::size_t n, std::size_t aux,
                                      const SharingPolicy &policy) {
    if (n != 6 || aux != 2) {
        throw ConfigurationError("quantum classifier supports n = 6 data qubits "
                                 "and A = 2 auxiliary qubits only");
    }
    BuiltCircuit built;
    auto &c = built.circuit;
    c.n_qubits = n + aux;
    std::vector<Qubit> data(n);
    std::iota(data.begin(), data.end(), Qubit{0});
    const std::vector<Qubit> aux_qubits{n, n + 1};

    c.append(build_conv_layer(data, policy.classifier_conv_shared, built.params,
                              "classifier.conv"));
    const auto toffoli = build_toffoli_layer(data);
    c.append(toffoli);
    c.append(build_rotation_layer(data, policy.rotation_layer_shared,
                                  built.params, "classifier.rot"));
    c.append(toffoli);

    PoolLayer pool = build_pool_layer(data, policy.classifier_pool_shared,
                                      built.params, "classifier.pool");
    c.append(pool.gates);
    for (auto q : pool.dropped) {
        c.discard(q);
    }

    c.append(build_aux_interaction({pool.kept[0], pool.kept[1], pool.kept[2]},
                                   {aux_qubits[0], aux_qubits[1]}));
    for (auto q : pool.kept) {
        c.discard(q);
    }
    c.append(build_aux_rotations(aux_qubits, policy.aux_rotations_trainable,
                                 built.params, "classifier.aux_rot"));
    c.kept_qubits = aux_qubits;
    c.validate();
    return built;
}

ClassifierOutput classify(const Matrix &gamma, const CircuitSpec &circuit,
                          const ParameterSet &params) {
    if (all_zero(gamma)) {
        throw DegenerateInputError("reduced feature matrix is identically zero");
    }
    if (!std::has_single_bit(gamma.size())) {
        throw InvalidInputError("feature count is not a power of two");
    }
    const auto m = static_cast<std::size_t>(std::countr_zero(gamma.size()));
    QuantumState state = amplitude_encode(gamma.data(), m, circuit.n_qubits);
    apply_circuit_inplace(state, circuit, params);
    ClassifierOutput out;
    out.scores = kept_expectations(state, circuit);
    out.probabilities = softmax(out.scores);
    return out;
}

ClassifierGrads classify_grads(const Matrix &gamma, const CircuitSpec &circuit,
                               const ParameterSet &params) {
    if (all_zero(gamma)) {
        throw DegenerateInputError("reduced feature matrix is identically zero");
    }
    ExpectationGradients g = expectation_gradients(circuit, params, gamma.data());
    ClassifierGrads out;
    out.output.scores = std::move(g.expectations);
    out.output.probabilities = softmax(out.output.scores);
    out.score_params = std::move(g.params);
    out.score_inputs = std::move(g.inputs);
    return out;
}

ParameterSet build_fcc_params() {
    ParameterSet p;
    for (std::size_t layer = 0; layer + 1 < kFccWidths.size(); ++layer) {
        const std::size_t in = kFccWidths[layer];
        const std::size_t out = kFccWidths[layer + 1];
        const std::string suffix = std::to_string(layer + 1);
        p.add_group("fcc.w" + suffix, in * out, true);
        p.add_group("fcc.b" + suffix, out, true);
    }
    return p;
}

ClassifierOutput fcc_forward(const Matrix &gamma, const ParameterSet &params) {
    check_fcc(gamma, params);
    const FccView view{params};
    std::vector<double> act;
    (void)fcc_input(gamma, act);
    for (std::size_t layer = 0; layer + 1 < kFccWidths.size(); ++layer) {
        const std::size_t in = kFccWidths[layer];
        const std::size_t out = kFccWidths[layer + 1];
        const auto w = view.weights(layer);
        const auto b = view.bias(layer);
        std::vector<double> next(out);
        for (std::size_t o = 0; o < out; ++o) {
            double z = b[o];
            for (std::size_t i = 0; i < in; ++i) {
                z += w[o * in + i] * act[i];
            }
            const bool hidden = layer + 2 < kFccWidths.size();
            next[o] = hidden ? std::max(z, 0.0) : z;
        }
        act = std::move(next);
    }
    ClassifierOutput result;
    result.scores = act;
    result.probabilities = softmax(act);
    return result;
}

ClassifierGrads fcc_grads(const Matrix &gamma, const ParameterSet &params) {
    check_fcc(gamma, params);
    const FccView view{params};
    constexpr std::size_t n_layers = kFccWidths.size() - 1;

    // Forward, caching layer inputs and pre-activations.
    std::array<std::vector<double>, n_layers + 1> acts;
    std::array<std::vector<double>, n_layers> pre;
    const double norm = fcc_input(gamma, acts[0]);
    for (std::size_t layer = 0; layer < n_layers; ++layer) {
        const std::size_t in = kFccWidths[layer];
        const std::size_t out = kFccWidths[layer + 1];
        const auto w = view.weights(layer);
        const auto b = view.bias(layer);
        pre[layer].resize(out);
        acts[layer + 1].resize(out);
        for (std::size_t o = 0; o < out; ++o) {
            double z = b[o];
            for (std::size_t i = 0; i < in; ++i) {
                z += w[o * in + i] * acts[layer][i];
            }
            pre[layer][o] = z;
            acts[layer + 1][o] = layer + 1 < n_layers ? std::max(z, 0.0) : z;
        }
    }

    const std::size_t n_out = kFccWidths.back();
    ClassifierGrads g;
    g.output.scores = acts[n_layers];
    g.output.probabilities = softmax(g.output.scores);
    g.score_params = Matrix(n_out, params.total_trainable());
    g.score_inputs = Matrix(n_out, kFccInputs);

    // Column offsets of every group in flat order (all groups trainable).
    std::array<std::size_t, 2 * n_layers> offset{};
    for (std::size_t k = 1; k < offset.size(); ++k) {
        offset[k] = offset[k - 1] + params.group(k - 1).values.size();
    }

    for (std::size_t k = 0; k < n_out; ++k) {
        std::vector<double> delta(n_out, 0.0);
        delta[k] = 1.0;
        auto row = g.score_params.row(k);
        for (std::size_t layer = n_layers; layer-- > 0;) {
            const std::size_t in = kFccWidths[layer];
            const std::size_t out = kFccWidths[layer + 1];
            const auto w = view.weights(layer);
            for (std::size_t o = 0; o < out; ++o) {
                if (delta[o] == 0.0) {
                    continue;
                }
                for (std::size_t i = 0; i < in; ++i) {
                    row[offset[2 * layer] + o * in + i] = delta[o] * acts[layer][i];
                }
                row[offset[2 * layer + 1] + o] = delta[o];
            }
            std::vector<double> back(in, 0.0);
            for (std::size_t i = 0; i < in; ++i) {
                double s = 0.0;
                for (std::size_t o = 0; o < out; ++o) {
                    s += w[o * in + i] * delta[o];
                }
                back[i] = s;
            }
            if (layer > 0) {
                for (std::size_t i = 0; i < in; ++i) {
                    if (pre[layer - 1][i] <= 0.0) {
                        back[i] = 0.0;
                    }
                }
            }
            delta = std::move(back);
        }
        // Through x = s g / |g|: dx/dg = (s / |g|) (I - x x^T / s^2).
        double dot = 0.0;
        for (std::size_t i = 0; i < kFccInputs; ++i) {
            dot += delta[i] * acts[0][i];
        }
        dot /= kFccInputScale * kFccInputScale;
        auto in_row = g.score_inputs.row(k);
        for (std::size_t i = 0; i < kFccInputs; ++i) {
            in_row[i] = kFccInputScale / norm * (delta[i] - dot * acts[0][i]);
        }
    }
    return g;
}

const char *to_string(ClassifierKind kind) noexcept {
    return kind == ClassifierKind::Quantum ? "quantum" : "fcc";
}

ClassifierModel ClassifierModel::quantum(const SharingPolicy &policy) {
    BuiltCircuit built = build_classifier_circuit(6, 2, policy);
    ClassifierModel m;
    m.kind_ = ClassifierKind::Quantum;
    m.circuit_ = std::move(built.circuit);
    m.params_ = std::move(built.params);
    return m;
}

ClassifierModel ClassifierModel::fcc() {
    ClassifierModel m;
    m.kind_ = ClassifierKind::Fcc;
    m.params_ = build_fcc_params();
    return m;
}

ClassifierOutput ClassifierModel::forward(const Matrix &gamma) const {
    return kind_ == ClassifierKind::Quantum ? classify(gamma, circuit_, params_)
                                            : fcc_forward(gamma, params_);
}

ClassifierGrads ClassifierModel::forward_with_grads(const Matrix &gamma) const {
    return kind_ == ClassifierKind::Quantum
               ? classify_grads(gamma, circuit_, params_)
               : fcc_grads(gamma, params_);
}

} // namespace qpatch
