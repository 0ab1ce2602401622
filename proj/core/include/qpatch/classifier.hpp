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
 * Classifiers over the reduced feature matrix: the 6 data + 2 auxiliary
 * qubit quantum circuit and the 64-8-4-2 fully-connected baseline.
 */
#pragma once

#include "qpatch/ansatz.hpp"
#include "qpatch/matrix.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace qpatch {

/// `scores` are the auxiliary-qubit <Z> values (quantum) or the output
/// logits (FCC); `probabilities` = softmax(scores).
struct ClassifierOutput {
    std::vector<double> scores;
    std::vector<double> probabilities;
};

[[nodiscard]] std::vector<double> softmax(std::span<const double> x);

/// probabilities is classes x classes Jacobian d softmax_i / d x_j.
[[nodiscard]] Matrix softmax_jacobian(std::span<const double> probabilities);

/**
 * @brief Quantum classifier on data qubits 0..n-1 and auxiliaries n..n+A-1.
 *
 * Conv layer, Toffoli layer, Rx/Ry/Rz layer, Toffoli layer, pool n -> n/2
 * keeping even qubits, data/aux CNOT interaction, aux rotations; the
 * auxiliary qubits are measured. Only (n, A) = (6, 2) is supported.
 */
[[nodiscard]] BuiltCircuit build_classifier_circuit(std::size_t n = 6,
                                                    std::size_t aux = 2,
                                                    const SharingPolicy &policy = {});

/// Throws DegenerateInputError when gamma is identically zero.
[[nodiscard]] ClassifierOutput classify(const Matrix &gamma,
                                        const CircuitSpec &circuit,
                                        const ParameterSet &params);

struct ClassifierGrads {
    ClassifierOutput output;
    Matrix score_params; ///< classes x trainable
    Matrix score_inputs; ///< classes x gamma entries (row-major gamma)
};

[[nodiscard]] ClassifierGrads classify_grads(const Matrix &gamma,
                                             const CircuitSpec &circuit,
                                             const ParameterSet &params);

inline constexpr std::size_t kFccInputs = 64;
inline constexpr std::array<std::size_t, 4> kFccWidths{64, 8, 4, 2};
/// The FCC sees gamma rescaled to unit RMS: 8 * gamma / |gamma|. This is the
/// amplitude vector of the quantum classifier, times sqrt(64).
inline constexpr double kFccInputScale = 8.0;

/// Groups fcc.w1, fcc.b1, fcc.w2, fcc.b2, fcc.w3, fcc.b3 (566 scalars), all
/// zero. Weight matrices are stored row-major as out x in.
[[nodiscard]] ParameterSet build_fcc_params();

/// Unit-RMS input, affine 64 -> 8, ReLU, affine 8 -> 4, ReLU, affine 4 -> 2,
/// softmax. Throws DegenerateInputError when gamma is identically zero.
[[nodiscard]] ClassifierOutput fcc_forward(const Matrix &gamma,
                                           const ParameterSet &params);

[[nodiscard]] ClassifierGrads fcc_grads(const Matrix &gamma,
                                        const ParameterSet &params);

enum class ClassifierKind { Quantum, Fcc };

[[nodiscard]] const char *to_string(ClassifierKind kind) noexcept;

/// Either classifier behind one interface, owning its parameters.
class ClassifierModel {
  public:
    [[nodiscard]] static ClassifierModel quantum(const SharingPolicy &policy = {});
    [[nodiscard]] static ClassifierModel fcc();

    [[nodiscard]] ClassifierKind kind() const noexcept { return kind_; }
    [[nodiscard]] const ParameterSet &params() const noexcept { return params_; }
    [[nodiscard]] ParameterSet &params() noexcept { return params_; }
    /// Null for the FCC.
    [[nodiscard]] const CircuitSpec *circuit() const noexcept {
        return kind_ == ClassifierKind::Quantum ? &circuit_ : nullptr;
    }

    [[nodiscard]] ClassifierOutput forward(const Matrix &gamma) const;
    [[nodiscard]] ClassifierGrads forward_with_grads(const Matrix &gamma) const;

  private:
    ClassifierKind kind_ = ClassifierKind::Quantum;
    CircuitSpec circuit_;
    ParameterSet params_;
};

} // namespace qpatch
