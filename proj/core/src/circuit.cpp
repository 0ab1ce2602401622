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
#include "qpatch/circuit.hpp"

#include "qpatch/error.hpp"

#include <algorithm>
#include <sstream>

namespace qpatch {

const char *to_string(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::H:
        return "H";
    case GateKind::X:
        return "X";
    case GateKind::Rx:
        return "RX";
    case GateKind::Ry:
        return "RY";
    case GateKind::Rz:
        return "RZ";
    case GateKind::CNOT:
        return "CNOT";
    case GateKind::CRz:
        return "CRZ";
    case GateKind::CRxAnti:
        return "CRX_OPEN";
    case GateKind::Toffoli:
        return "TOFFOLI";
    }
    return "?";
}

bool is_parameterized(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz:
    case GateKind::CRz:
    case GateKind::CRxAnti:
        return true;
    default:
        return false;
    }
}

std::size_t arity(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::CNOT:
    case GateKind::CRz:
    case GateKind::CRxAnti:
        return 2;
    case GateKind::Toffoli:
        return 3;
    default:
        return 1;
    }
}

void validate_gate(const GateOp &gate, std::size_t n_qubits) {
    if (gate.qubits.size() != arity(gate.kind)) {
        throw InvalidInputError(std::string(to_string(gate.kind)) +
                                " expects " + std::to_string(arity(gate.kind)) +
                                " qubits");
    }
    for (std::size_t i = 0; i < gate.qubits.size(); ++i) {
        if (gate.qubits[i] >= n_qubits) {
            throw InvalidInputError("qubit " + std::to_string(gate.qubits[i]) +
                                    " out of range for a " +
                                    std::to_string(n_qubits) +
                                    "-qubit register");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (gate.qubits[i] == gate.qubits[j]) {
                throw InvalidInputError(std::string(to_string(gate.kind)) +
                                        " names qubit " +
                                        std::to_string(gate.qubits[i]) +
                                        " twice");
            }
        }
    }
    if (is_parameterized(gate.kind) != gate.param.has_value()) {
        throw ContractError(std::string(to_string(gate.kind)) +
                            (gate.param ? " takes no parameter"
                                        : " requires a parameter slot"));
    }
}

GateOp make_gate(GateKind kind, std::vector<Qubit> qubits,
                 std::optional<ParamRef> param) {
    return GateOp{kind, std::move(qubits), param};
}

void CircuitSpec::append(const std::vector<GateOp> &more) {
    gates.insert(gates.end(), more.begin(), more.end());
}

bool CircuitSpec::is_discarded(Qubit q) const noexcept {
    return std::any_of(discarded.begin(), discarded.end(),
                       [q](const auto &d) { return d.second == q; });
}

void CircuitSpec::validate() const {
    for (const auto &g : gates) {
        validate_gate(g, n_qubits);
    }
    if (kept_qubits.empty()) {
        throw InvalidInputError("circuit has no kept qubits");
    }
    for (std::size_t i = 0; i < kept_qubits.size(); ++i) {
        if (kept_qubits[i] >= n_qubits) {
            throw InvalidInputError("kept qubit out of range");
        }
        if (std::count(kept_qubits.begin(), kept_qubits.end(),
                       kept_qubits[i]) != 1) {
            throw InvalidInputError("kept qubits must be distinct");
        }
        if (is_discarded(kept_qubits[i])) {
            throw InvalidInputError("kept qubit " +
                                    std::to_string(kept_qubits[i]) +
                                    " was discarded");
        }
    }
    for (const auto &[at, q] : discarded) {
        for (std::size_t g = at; g < gates.size(); ++g) {
            const auto &qs = gates[g].qubits;
            if (std::find(qs.begin(), qs.end(), q) != qs.end()) {
                throw InvalidInputError("gate " + std::to_string(g) +
                                        " touches discarded qubit " +
                                        std::to_string(q));
            }
        }
    }
}

std::string describe(const CircuitSpec &circuit, const ParameterSet *params) {
    std::ostringstream out;
    out << "qubits " << circuit.n_qubits << ", gates " << circuit.gates.size()
        << "\n";
    std::size_t next_discard = 0;
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        while (next_discard < circuit.discarded.size() &&
               circuit.discarded[next_discard].first == i) {
            out << "       -- discard q" << circuit.discarded[next_discard].second
                << "\n";
            ++next_discard;
        }
        const auto &g = circuit.gates[i];
        out.width(5);
        out << i << "  " << to_string(g.kind);
        for (auto q : g.qubits) {
            out << " q" << q;
        }
        if (g.param) {
            out << "  [";
            if (params != nullptr && params->contains(*g.param)) {
                out << params->group(g.param->group).name;
            } else {
                out << "g" << g.param->group;
            }
            out << "#" << g.param->index << "]";
        }
        out << "\n";
    }
    for (; next_discard < circuit.discarded.size(); ++next_discard) {
        out << "       -- discard q" << circuit.discarded[next_discard].second
            << "\n";
    }
    out << "kept:";
    for (auto q : circuit.kept_qubits) {
        out << " q" << q;
    }
    out << "\n";
    return out.str();
}

} // namespace qpatch
