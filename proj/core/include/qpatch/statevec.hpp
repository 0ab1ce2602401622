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
 * Dense state-vector simulator: amplitude encoding, gate application,
 * Pauli-Z readout and adjoint-method gradients of Z expectations.
 */
#pragma once

#include "qpatch/circuit.hpp"
#include "qpatch/matrix.hpp"
#include "qpatch/parameters.hpp"

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qpatch {

using Complex = std::complex<double>;

/// Upper bound on register size; 2^20 amplitudes is ~16 MiB.
inline constexpr std::size_t kMaxQubits = 20;

/**
 * @brief Pure state of an n-qubit register, 2^n complex amplitudes.
 *
 * Amplitude index bit q is the computational-basis value of qubit q.
 */
class QuantumState {
  public:
    /// |0...0> on n qubits.
    explicit QuantumState(std::size_t n_qubits);

    /// Takes ownership of raw amplitudes. The length must be a power of two;
    /// normalization is the caller's responsibility.
    static QuantumState from_amplitudes(std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept {
        return amplitudes_.size();
    }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept {
        return amplitudes_;
    }
    [[nodiscard]] double norm_squared() const noexcept;

    bool operator==(const QuantumState &) const = default;

  private:
    QuantumState(std::size_t n_qubits, std::vector<Complex> amplitudes)
        : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}

    std::size_t n_qubits_;
    std::vector<Complex> amplitudes_;
};

/**
 * @brief Amplitude-encodes 2^m reals onto the low m qubits of an
 * `n_qubits` register (remaining qubits in |0>).
 *
 * values[i] becomes the amplitude of basis index i. A zero vector encodes
 * as |0...0>.
 */
[[nodiscard]] QuantumState amplitude_encode(std::span<const double> values,
                                            std::size_t m,
                                            std::size_t n_qubits);
[[nodiscard]] inline QuantumState
amplitude_encode(std::span<const double> values, std::size_t m) {
    return amplitude_encode(values, m, m);
}

/// In-place gate application. `angle` must be present exactly when the
/// gate kind is parameterized.
void apply_gate_inplace(QuantumState &state, const GateOp &gate,
                        std::optional<double> angle = std::nullopt);

[[nodiscard]] QuantumState apply_gate(QuantumState state, const GateOp &gate,
                                      std::optional<double> angle = std::nullopt);

/// Applies every gate in order, resolving angles from `params`.
void apply_circuit_inplace(QuantumState &state, const CircuitSpec &circuit,
                           const ParameterSet &params);

[[nodiscard]] QuantumState apply_circuit(QuantumState state,
                                         const CircuitSpec &circuit,
                                         const ParameterSet &params);

/// <psi| Z_qubit |psi>.
[[nodiscard]] double expectation_z(const QuantumState &state, Qubit qubit);

/// Z expectations of the circuit's kept qubits, in kept order.
[[nodiscard]] std::vector<double>
kept_expectations(const QuantumState &state, const CircuitSpec &circuit);

/// Result of one adjoint sweep.
struct ExpectationGradients {
    /// <Z_k> for every kept qubit k.
    std::vector<double> expectations;
    /// kept x total_trainable, columns in ParameterSet flat order. A shared
    /// slot accumulates every gate occurrence that binds it.
    Matrix params;
    /// kept x raw input count; empty unless input gradients were requested.
    Matrix inputs;
};

/**
 * @brief Expectations plus exact parameter gradients for a prepared input
 * state, by adjoint differentiation.
 */
[[nodiscard]] ExpectationGradients
expectation_gradients(const CircuitSpec &circuit, const ParameterSet &params,
                      const QuantumState &input);

/**
 * @brief Same sweep, starting from raw (pre-normalization) inputs, and
 * additionally returning d<Z_k>/d raw_inputs through the L2 normalization.
 *
 * Raw inputs occupy the low log2(size) qubits. Throws DegenerateInputError
 * for a zero input vector.
 */
[[nodiscard]] ExpectationGradients
expectation_gradients(const CircuitSpec &circuit, const ParameterSet &params,
                      std::span<const double> raw_inputs);

/// kept x total_trainable parameter Jacobian.
[[nodiscard]] Matrix grad_expectation_params(const CircuitSpec &circuit,
                                             const ParameterSet &params,
                                             const QuantumState &input);

/// kept x |wrt| Jacobian restricted to the requested slots. Throws
/// ContractError if any requested slot is frozen or unknown.
[[nodiscard]] Matrix grad_expectation_params(const CircuitSpec &circuit,
                                             const ParameterSet &params,
                                             const QuantumState &input,
                                             std::span<const ParamRef> wrt);

/// kept x raw_inputs Jacobian including the normalization Jacobian.
[[nodiscard]] Matrix grad_expectation_inputs(const CircuitSpec &circuit,
                                             const ParameterSet &params,
                                             std::span<const double> raw_inputs);

} // namespace qpatch
