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
 * Builders for the two-qubit convolution/pooling ansatzes and the layers
 * assembled from them.
 *
 * Operator products are applied rightmost factor first, so every gate list
 * below is in execution order. Layer builders register their angles as a
 * new named group in the supplied ParameterSet.
 */
#pragma once

#include "qpatch/circuit.hpp"
#include "qpatch/parameters.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace qpatch {

/// Which layers bind all of their ansatzes to one set of angles.
struct SharingPolicy {
    bool reducer_conv_shared = true;
    bool reducer_pool_shared = true;
    bool classifier_conv_shared = true;
    bool classifier_pool_shared = true;
    bool rotation_layer_shared = false;
    bool aux_rotations_trainable = false;

    bool operator==(const SharingPolicy &) const = default;
};

/// A circuit together with the parameter groups its gates bind to.
struct BuiltCircuit {
    CircuitSpec circuit;
    ParameterSet params;
};

/// H(a), H(b), CNOT(a -> b), Rx(t1) on a, Rx(t2) on b.
[[nodiscard]] std::vector<GateOp> conv_ansatz(Qubit a, Qubit b, ParamRef t1,
                                              ParamRef t2);

/// CRz(t1) control drop -> keep, X(drop), open-control Rx(t2) drop -> keep.
/// The caller discards `drop` afterwards.
[[nodiscard]] std::vector<GateOp> pool_ansatz(Qubit keep, Qubit drop,
                                              ParamRef t1, ParamRef t2);

/**
 * @brief Two sub-layers of conv ansatzes over an even active list.
 *
 * Sub-layer 1 pairs neighbours (1,2),(3,4),...; sub-layer 2 pairs the list
 * outside-in (1,2k),(2,2k-1),...,(k,k+1). Two active qubits give a single
 * ansatz. Shared layers use 2 angles, unshared ones 2 per ansatz.
 */
[[nodiscard]] std::vector<GateOp> build_conv_layer(std::span<const Qubit> active,
                                                   bool shared,
                                                   ParameterSet &params,
                                                   const std::string &group);

struct PoolLayer {
    std::vector<GateOp> gates;
    std::vector<Qubit> kept;
    std::vector<Qubit> dropped;
};

/// Pool ansatz on consecutive pairs; the first qubit of every pair is kept.
[[nodiscard]] PoolLayer build_pool_layer(std::span<const Qubit> active,
                                         bool shared, ParameterSet &params,
                                         const std::string &group);

/**
 * @brief Parameterless three-qubit interaction layer over n >= 3 qubits.
 *
 * With 1-based labels: T(1; 2, n), T(2; n-1, n), then T(k; k-1, k-2) for
 * k = 3..n, where T(target; controls).
 */
[[nodiscard]] std::vector<GateOp> build_toffoli_layer(std::span<const Qubit> active);
/// Same layer on qubits 0..n-1.
[[nodiscard]] std::vector<GateOp> build_toffoli_layer(std::size_t n);

/// Rx on every qubit, then Ry on every qubit, then Rz on every qubit.
/// Unshared: group layout is [rx..., ry..., rz...].
[[nodiscard]] std::vector<GateOp> build_rotation_layer(std::span<const Qubit> qubits,
                                                       bool shared,
                                                       ParameterSet &params,
                                                       const std::string &group);

/// CNOT(q5 -> a2), CNOT(q3 -> a1), CNOT(q3 -> q5), CNOT(q1 -> q3),
/// Toffoli(q3, q5 -> q1) for data = {q1, q3, q5}, aux = {a1, a2}.
[[nodiscard]] std::vector<GateOp>
build_aux_interaction(const std::array<Qubit, 3> &data,
                      const std::array<Qubit, 2> &aux);

/// Rx(t1), Ry(t2), Rz(t3) on each auxiliary qubit, angles shared across
/// auxiliaries. The group is frozen at zero unless `trainable`.
[[nodiscard]] std::vector<GateOp> build_aux_rotations(std::span<const Qubit> aux,
                                                      bool trainable,
                                                      ParameterSet &params,
                                                      const std::string &group);

} // namespace qpatch
