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
 * Gate-list intermediate representation shared by the simulator and the
 * circuit builders.
 *
 * Qubit 0 is the least-significant bit of an amplitude index. Controlled
 * gates list their controls first and their target last.
 */
#pragma once

#include "qpatch/parameters.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qpatch {

using Qubit = std::size_t;

enum class GateKind : std::uint8_t {
    H,
    X,
    Rx,
    Ry,
    Rz,
    CNOT,
    CRz,
    CRxAnti, ///< Rx on the target when the control is |0>.
    Toffoli,
};

[[nodiscard]] const char *to_string(GateKind kind) noexcept;
[[nodiscard]] bool is_parameterized(GateKind kind) noexcept;
/// Number of qubits the kind acts on (controls plus target).
[[nodiscard]] std::size_t arity(GateKind kind) noexcept;

struct GateOp {
    GateKind kind = GateKind::H;
    std::vector<Qubit> qubits;
    std::optional<ParamRef> param;

    [[nodiscard]] Qubit target() const { return qubits.back(); }

    bool operator==(const GateOp &) const = default;
};

/// Throws InvalidInputError if qubits collide or the arity is wrong, and
/// ContractError if the parameter binding does not match the kind.
void validate_gate(const GateOp &gate, std::size_t n_qubits);

[[nodiscard]] GateOp make_gate(GateKind kind, std::vector<Qubit> qubits,
                               std::optional<ParamRef> param = std::nullopt);

struct CircuitSpec {
    std::size_t n_qubits = 0;
    std::vector<GateOp> gates;
    std::vector<Qubit> kept_qubits;
    /// (gate count at the time of discarding, qubit); a discarded qubit is
    /// never named by a later gate and never measured.
    std::vector<std::pair<std::size_t, Qubit>> discarded;

    void append(const std::vector<GateOp> &more);
    void discard(Qubit q) { discarded.emplace_back(gates.size(), q); }

    /// Structural checks: gate validity, kept qubits, discarded-qubit rule.
    void validate() const;

    [[nodiscard]] bool is_discarded(Qubit q) const noexcept;
};

/// Human-readable one-gate-per-line listing, used by `qpatch inspect`.
[[nodiscard]] std::string describe(const CircuitSpec &circuit,
                                   const ParameterSet *params = nullptr);

} // namespace qpatch
