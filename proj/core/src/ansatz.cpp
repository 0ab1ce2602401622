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
#include "qpatch/ansatz.hpp"

#include "qpatch/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace qpatch {
namespace {

void require_distinct(std::span<const Qubit> qubits, const char *what) {
    std::set<Qubit> seen(qubits.begin(), qubits.end());
    if (seen.size() != qubits.size()) {
        throw InvalidInputError(std::string(what) + ": qubits must be distinct");
    }
}

void require_even(std::span<const Qubit> active, const char *what) {
    if (active.size() < 2 || active.size() % 2 != 0) {
        throw InvalidInputError(std::string(what) +
                                " needs an even number (>= 2) of active "
                                "qubits, got " +
                                std::to_string(active.size()));
    }
}

/// Hands out (t1, t2) slot pairs from one group: the same pair when shared,
/// a fresh pair per call otherwise.
class PairSlots {
  public:
    PairSlots(ParameterSet &params, const std::string &group, bool shared,
              std::size_t ansatz_count)
        : group_(params.add_group(group, shared ? 2 : 2 * ansatz_count, true)),
          shared_(shared) {}

    std::pair<ParamRef, ParamRef> next() {
        const std::size_t base = shared_ ? 0 : 2 * used_++;
        return {ParamRef{group_, base}, ParamRef{group_, base + 1}};
    }

  private:
    std::size_t group_;
    bool shared_;
    std::size_t used_ = 0;
};

} // namespace

std::vector<GateOp> conv_ansatz(Qubit a, Qubit b, ParamRef t1, ParamRef t2) {
    if (a == b) {
        throw InvalidInputError("conv ansatz needs two distinct qubits");
    }
    return {
        make_gate(GateKind::H, {a}),
        make_gate(GateKind::H, {b}),
        make_gate(GateKind::CNOT, {a, b}),
        make_gate(GateKind::Rx, {a}, t1),
        make_gate(GateKind::Rx, {b}, t2),
    };
}

std::vector<GateOp> pool_ansatz(Qubit keep, Qubit drop, ParamRef t1,
                                ParamRef t2) {
    if (keep == drop) {
        throw InvalidInputError("pool ansatz needs two distinct qubits");
    }
    return {
        make_gate(GateKind::CRz, {drop, keep}, t1),
        make_gate(GateKind::X, {drop}),
        make_gate(GateKind::CRxAnti, {drop, keep}, t2),
    };
}

std::vector<GateOp> build_conv_layer(std::span<const Qubit> active, bool shared,
                                     ParameterSet &params,
                                     const std::string &group) {
    require_even(active, "conv layer");
    require_distinct(active, "conv layer");
    const std::size_t n = active.size();

    std::vector<std::pair<Qubit, Qubit>> pairs;
    if (n == 2) {
        pairs.emplace_back(active[0], active[1]);
    } else {
        for (std::size_t i = 0; i < n; i += 2) {
            pairs.emplace_back(active[i], active[i + 1]);
        }
        for (std::size_t i = 0; i < n / 2; ++i) {
            pairs.emplace_back(active[i], active[n - 1 - i]);
        }
    }

    PairSlots slots(params, group, shared, pairs.size());
    std::vector<GateOp> gates;
    for (const auto &[a, b] : pairs) {
        const auto [t1, t2] = slots.next();
        const auto ansatz = conv_ansatz(a, b, t1, t2);
        gates.insert(gates.end(), ansatz.begin(), ansatz.end());
    }
    return gates;
}

PoolLayer build_pool_layer(std::span<const Qubit> active, bool shared,
                           ParameterSet &params, const std::string &group) {
    require_even(active, "pool layer");
    require_distinct(active, "pool layer");
    PairSlots slots(params, group, shared, active.size() / 2);
    PoolLayer layer;
    for (std::size_t i = 0; i < active.size(); i += 2) {
        const auto [t1, t2] = slots.next();
        const auto ansatz = pool_ansatz(active[i], active[i + 1], t1, t2);
        layer.gates.insert(layer.gates.end(), ansatz.begin(), ansatz.end());
        layer.kept.push_back(active[i]);
        layer.dropped.push_back(active[i + 1]);
    }
    return layer;
}

std::vector<GateOp> build_toffoli_layer(std::span<const Qubit> active) {
    const std::size_t n = active.size();
    if (n < 3) {
        throw InvalidInputError("toffoli layer needs at least 3 qubits");
    }
    require_distinct(active, "toffoli layer");
    // 1-based label -> register qubit
    auto q = [&](std::size_t label) { return active[label - 1]; };
    std::vector<GateOp> gates;
    gates.push_back(make_gate(GateKind::Toffoli, {q(2), q(n), q(1)}));
    gates.push_back(make_gate(GateKind::Toffoli, {q(n - 1), q(n), q(2)}));
    for (std::size_t k = 3; k <= n; ++k) {
        gates.push_back(make_gate(GateKind::Toffoli, {q(k - 1), q(k - 2), q(k)}));
    }
    return gates;
}

std::vector<GateOp> build_toffoli_layer(std::size_t n) {
    std::vector<Qubit> active(n);
    std::iota(active.begin(), active.end(), Qubit{0});
    return build_toffoli_layer(active);
}

std::vector<GateOp> build_rotation_layer(std::span<const Qubit> qubits,
                                         bool shared, ParameterSet &params,
                                         const std::string &group) {
    if (qubits.empty()) {
        throw InvalidInputError("rotation layer needs at least one qubit");
    }
    require_distinct(qubits, "rotation layer");
    const std::size_t n = qubits.size();
    const std::size_t g = params.add_group(group, shared ? 3 : 3 * n, true);
    std::vector<GateOp> gates;
    const std::array axes{GateKind::Rx, GateKind::Ry, GateKind::Rz};
    for (std::size_t a = 0; a < axes.size(); ++a) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t slot = shared ? a : a * n + i;
            gates.push_back(make_gate(axes[a], {qubits[i]}, ParamRef{g, slot}));
        }
    }
    return gates;
}

std::vector<GateOp> build_aux_interaction(const std::array<Qubit, 3> &data,
                                          const std::array<Qubit, 2> &aux) {
    const std::array<Qubit, 5> all{data[0], data[1], data[2], aux[0], aux[1]};
    require_distinct(all, "aux interaction");
    const auto [q1, q3, q5] = data;
    const auto [a1, a2] = aux;
    return {
        make_gate(GateKind::CNOT, {q5, a2}),
        make_gate(GateKind::CNOT, {q3, a1}),
        make_gate(GateKind::CNOT, {q3, q5}),
        make_gate(GateKind::CNOT, {q1, q3}),
        make_gate(GateKind::Toffoli, {q3, q5, q1}),
    };
}

std::vector<GateOp> build_aux_rotations(std::span<const Qubit> aux,
                                        bool trainable, ParameterSet &params,
                                        const std::string &group) {
    if (aux.empty()) {
        throw InvalidInputError("aux rotations need at least one qubit");
    }
    require_distinct(aux, "aux rotations");
    const std::size_t g = params.add_group(group, 3, trainable);
    std::vector<GateOp> gates;
    for (auto q : aux) {
        gates.push_back(make_gate(GateKind::Rx, {q}, ParamRef{g, 0}));
        gates.push_back(make_gate(GateKind::Ry, {q}, ParamRef{g, 1}));
        gates.push_back(make_gate(GateKind::Rz, {q}, ParamRef{g, 2}));
    }
    return gates;
}

} // namespace qpatch
