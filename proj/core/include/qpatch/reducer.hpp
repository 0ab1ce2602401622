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
 * Patch-wise quantum reduction with a classical attention mask.
 *
 * An N x N image is cut into non-overlapping r x r patches. Every patch is
 * amplitude-encoded onto m = log2(r^2) qubits, reduced to one qubit by the
 * reducer circuit and read out as <Z>. The readout is multiplied by the
 * patch's attention value to form one entry of the (N/r) x (N/r) matrix
 * Gamma. All patches share the same reducer parameters.
 */
#pragma once

#include "qpatch/ansatz.hpp"
#include "qpatch/matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace qpatch {

struct PatchGrid {
    std::size_t side = 0;   ///< N
    std::size_t patch = 0;  ///< r
    std::size_t grid = 0;   ///< N / r
    /// grid*grid patches, row-major over (p, q); each r*r values row-major.
    std::vector<std::vector<double>> patches;

    [[nodiscard]] const std::vector<double> &at(std::size_t p, std::size_t q) const {
        return patches[p * grid + q];
    }
};

/// Throws ConfigurationError unless r divides N and r^2 is a power of two.
[[nodiscard]] PatchGrid extract_patches(const Matrix &image, std::size_t r);
[[nodiscard]] Matrix reassemble(const PatchGrid &grid);

/// sum(X) / (max(X) * (1 + 2 + ... + |X|)); 0 for an all-zero patch.
/// Throws ContractError on negative or non-finite values.
[[nodiscard]] double attention_mask(std::span<const double> patch);

enum class ReducerKind { Proposed, NaivePool };

[[nodiscard]] const char *to_string(ReducerKind kind) noexcept;

/// Alternating conv and pool layers on m = log2(r^2) qubits until one
/// qubit (qubit 0) remains. m = 4 gives 8 trainable angles by default.
[[nodiscard]] BuiltCircuit build_reducer_circuit(std::size_t r,
                                                 const SharingPolicy &policy = {});

/// Pooling layers only; 4 trainable angles for r = 4 by default.
[[nodiscard]] BuiltCircuit build_naive_pool_reducer(std::size_t r,
                                                    const SharingPolicy &policy = {});

[[nodiscard]] BuiltCircuit build_reducer(ReducerKind kind, std::size_t r,
                                         const SharingPolicy &policy = {});

struct ReducedFeatureMatrix {
    Matrix gamma;        ///< quantum_part (.) mask_part
    Matrix quantum_part; ///< per-patch <Z>
    Matrix mask_part;    ///< per-patch attention value
};

/// Patch side implied by a reducer circuit (2^(n_qubits / 2)).
[[nodiscard]] std::size_t patch_side(const CircuitSpec &reducer);

/// Reduced quantum readout of one flattened patch.
[[nodiscard]] double reduce_patch(std::span<const double> patch,
                                  const CircuitSpec &circuit,
                                  const ParameterSet &params);

[[nodiscard]] ReducedFeatureMatrix reduce_image(const Matrix &image,
                                                const CircuitSpec &circuit,
                                                const ParameterSet &params);

struct ReducedWithGrads {
    ReducedFeatureMatrix features;
    /// patches x trainable: d quantum_part / d theta_r, patches row-major.
    Matrix quantum_grad;
    /// patches x trainable: d gamma / d theta_r = mask * quantum_grad.
    Matrix gamma_grad;
};

[[nodiscard]] ReducedWithGrads reduce_image_with_grads(const Matrix &image,
                                                       const CircuitSpec &circuit,
                                                       const ParameterSet &params);

} // namespace qpatch
