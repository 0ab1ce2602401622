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
#include "qpatch/statevec.hpp"

#include "qpatch/error.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <numbers>

namespace qpatch {
namespace {

using Mat2 = std::array<Complex, 4>; // row-major [[m0, m1], [m2, m3]]

/// A gate as "2x2 matrix on `target` when (index & ctrl_mask) == ctrl_value".
struct Kernel {
    std::size_t target_bit = 0;
    std::size_t ctrl_mask = 0;
    std::size_t ctrl_value = 0;
    Mat2 m{};
};

constexpr Complex kI{0.0, 1.0};

Mat2 rotation(GateKind axis, double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    switch (axis) {
    case GateKind::Rx:
    case GateKind::CRxAnti:
        return {c, -kI * s, -kI * s, c};
    case GateKind::Ry:
        return {c, -s, s, c};
    case GateKind::Rz:
    case GateKind::CRz:
        return {std::polar(1.0, -theta / 2.0), 0.0, 0.0,
                std::polar(1.0, theta / 2.0)};
    default:
        return {1.0, 0.0, 0.0, 1.0};
    }
}

/// Pauli generator G with R(theta) = exp(-i theta G / 2).
Mat2 generator(GateKind kind) {
    switch (kind) {
    case GateKind::Rx:
    case GateKind::CRxAnti:
        return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Ry:
        return {0.0, -kI, kI, 0.0};
    default:
        return {1.0, 0.0, 0.0, -1.0};
    }
}

Kernel make_kernel(const GateOp &gate, double angle) {
    Kernel k;
    const auto &q = gate.qubits;
    k.target_bit = std::size_t{1} << gate.target();
    switch (gate.kind) {
    case GateKind::H: {
        const double r = std::numbers::sqrt2 / 2.0;
        k.m = {r, r, r, -r};
        break;
    }
    case GateKind::X:
        k.m = {0.0, 1.0, 1.0, 0.0};
        break;
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz:
        k.m = rotation(gate.kind, angle);
        break;
    case GateKind::CNOT:
        k.ctrl_mask = k.ctrl_value = std::size_t{1} << q[0];
        k.m = {0.0, 1.0, 1.0, 0.0};
        break;
    case GateKind::CRz:
        k.ctrl_mask = k.ctrl_value = std::size_t{1} << q[0];
        k.m = rotation(gate.kind, angle);
        break;
    case GateKind::CRxAnti:
        k.ctrl_mask = std::size_t{1} << q[0];
        k.ctrl_value = 0;
        k.m = rotation(gate.kind, angle);
        break;
    case GateKind::Toffoli:
        k.ctrl_mask = k.ctrl_value =
            (std::size_t{1} << q[0]) | (std::size_t{1} << q[1]);
        k.m = {0.0, 1.0, 1.0, 0.0};
        break;
    }
    return k;
}

Mat2 adjoint(const Mat2 &m) {
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]),
            std::conj(m[3])};
}

/// Calls fn(i0, i1) for every amplitude pair the kernel mixes, where i0 has
/// the target bit clear and i1 = i0 | target_bit.
template <class Fn>
inline void for_each_pair(std::size_t dim, const Kernel &k, Fn &&fn) {
    const std::size_t low = k.target_bit - 1;
    const std::size_t half = dim / 2;
    for (std::size_t p = 0; p < half; ++p) {
        const std::size_t i0 = ((p & ~low) << 1) | (p & low);
        if ((i0 & k.ctrl_mask) != k.ctrl_value) {
            continue;
        }
        fn(i0, i0 | k.target_bit);
    }
}

void apply_kernel(std::span<Complex> amps, const Kernel &k, const Mat2 &m) {
    for_each_pair(amps.size(), k, [&](std::size_t i0, std::size_t i1) {
        const Complex a = amps[i0];
        const Complex b = amps[i1];
        amps[i0] = m[0] * a + m[1] * b;
        amps[i1] = m[2] * a + m[3] * b;
    });
}

/// Im <lambda| (P_ctrl (x) G) |phi>.
double generator_overlap(std::span<const Complex> lambda,
                         std::span<const Complex> phi, const Kernel &k,
                         const Mat2 &g) {
    Complex acc = 0.0;
    for_each_pair(phi.size(), k, [&](std::size_t i0, std::size_t i1) {
        const Complex a = phi[i0];
        const Complex b = phi[i1];
        acc += std::conj(lambda[i0]) * (g[0] * a + g[1] * b) +
               std::conj(lambda[i1]) * (g[2] * a + g[3] * b);
    });
    return acc.imag();
}

void check_angle(const GateOp &gate, std::optional<double> angle) {
    if (is_parameterized(gate.kind) != angle.has_value()) {
        throw ContractError(std::string(to_string(gate.kind)) +
                            (angle ? ": unexpected angle" : ": missing angle"));
    }
}

double resolve_angle(const GateOp &gate, const ParameterSet &params) {
    return gate.param ? params.value(*gate.param) : 0.0;
}

bool is_power_of_two(std::size_t n) { return n != 0 && std::has_single_bit(n); }

/// Shared adjoint sweep. `input_cotangents`, when non-null, receives
/// lambda_k = U^dagger Z_k U psi for every kept qubit.
ExpectationGradients adjoint_sweep(const CircuitSpec &circuit,
                                   const ParameterSet &params,
                                   const QuantumState &input,
                                   std::vector<std::vector<Complex>> *input_cotangents) {
    circuit.validate();
    if (input.n_qubits() != circuit.n_qubits) {
        throw InvalidInputError("input state has " +
                                std::to_string(input.n_qubits()) +
                                " qubits, circuit expects " +
                                std::to_string(circuit.n_qubits));
    }
    const std::size_t n_gates = circuit.gates.size();
    std::vector<Kernel> kernels;
    std::vector<std::optional<std::size_t>> columns(n_gates);
    kernels.reserve(n_gates);
    for (std::size_t i = 0; i < n_gates; ++i) {
        const auto &g = circuit.gates[i];
        kernels.push_back(make_kernel(g, resolve_angle(g, params)));
        if (g.param) {
            columns[i] = params.flat_index(*g.param);
        }
    }

    std::vector<Complex> phi(input.amplitudes().begin(),
                             input.amplitudes().end());
    for (const auto &k : kernels) {
        apply_kernel(phi, k, k.m);
    }

    const std::size_t n_kept = circuit.kept_qubits.size();
    ExpectationGradients out;
    out.expectations.resize(n_kept);
    out.params = Matrix(n_kept, params.total_trainable());

    std::vector<std::vector<Complex>> lambdas(n_kept, phi);
    for (std::size_t k = 0; k < n_kept; ++k) {
        const std::size_t bit = std::size_t{1} << circuit.kept_qubits[k];
        double z = 0.0;
        auto &lam = lambdas[k];
        for (std::size_t i = 0; i < lam.size(); ++i) {
            const double p = std::norm(lam[i]);
            if ((i & bit) != 0) {
                lam[i] = -lam[i];
                z -= p;
            } else {
                z += p;
            }
        }
        out.expectations[k] = z;
    }

    for (std::size_t gi = n_gates; gi-- > 0;) {
        const Kernel &kern = kernels[gi];
        if (columns[gi]) {
            const Mat2 g = generator(circuit.gates[gi].kind);
            for (std::size_t k = 0; k < n_kept; ++k) {
                out.params(k, *columns[gi]) +=
                    generator_overlap(lambdas[k], phi, kern, g);
            }
        }
        const Mat2 inv = adjoint(kern.m);
        apply_kernel(phi, kern, inv);
        for (auto &lam : lambdas) {
            apply_kernel(lam, kern, inv);
        }
    }

    if (input_cotangents != nullptr) {
        *input_cotangents = std::move(lambdas);
    }
    return out;
}

} // namespace

QuantumState::QuantumState(std::size_t n_qubits)
    : n_qubits_(n_qubits), amplitudes_() {
    if (n_qubits > kMaxQubits) {
        throw InvalidInputError("register of " + std::to_string(n_qubits) +
                                " qubits exceeds the simulator limit");
    }
    amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

QuantumState QuantumState::from_amplitudes(std::vector<Complex> amplitudes) {
    if (!is_power_of_two(amplitudes.size())) {
        throw InvalidInputError("amplitude count " +
                                std::to_string(amplitudes.size()) +
                                " is not a power of two");
    }
    const auto n = static_cast<std::size_t>(std::countr_zero(amplitudes.size()));
    if (n > kMaxQubits) {
        throw InvalidInputError("register exceeds the simulator limit");
    }
    return QuantumState(n, std::move(amplitudes));
}

double QuantumState::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto &a : amplitudes_) {
        s += std::norm(a);
    }
    return s;
}

QuantumState amplitude_encode(std::span<const double> values, std::size_t m,
                              std::size_t n_qubits) {
    if (m > kMaxQubits || values.size() != (std::size_t{1} << m)) {
        throw InvalidInputError("amplitude encoding needs 2^" +
                                std::to_string(m) + " values, got " +
                                std::to_string(values.size()));
    }
    if (n_qubits < m) {
        throw InvalidInputError("register smaller than the encoded block");
    }
    double norm2 = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InvalidInputError("non-finite value in amplitude encoding");
        }
        norm2 += v * v;
    }
    QuantumState state(n_qubits);
    if (norm2 == 0.0) {
        return state;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < values.size(); ++i) {
        amps[i] = values[i] * inv;
    }
    return state;
}

void apply_gate_inplace(QuantumState &state, const GateOp &gate,
                        std::optional<double> angle) {
    validate_gate(gate, state.n_qubits());
    check_angle(gate, angle);
    const Kernel k = make_kernel(gate, angle.value_or(0.0));
    apply_kernel(state.amplitudes(), k, k.m);
}

QuantumState apply_gate(QuantumState state, const GateOp &gate,
                        std::optional<double> angle) {
    apply_gate_inplace(state, gate, angle);
    return state;
}

void apply_circuit_inplace(QuantumState &state, const CircuitSpec &circuit,
                           const ParameterSet &params) {
    if (state.n_qubits() != circuit.n_qubits) {
        throw InvalidInputError("state/circuit register size mismatch");
    }
    for (const auto &g : circuit.gates) {
        validate_gate(g, circuit.n_qubits);
        const Kernel k = make_kernel(g, resolve_angle(g, params));
        apply_kernel(state.amplitudes(), k, k.m);
    }
}

QuantumState apply_circuit(QuantumState state, const CircuitSpec &circuit,
                           const ParameterSet &params) {
    apply_circuit_inplace(state, circuit, params);
    return state;
}

double expectation_z(const QuantumState &state, Qubit qubit) {
    if (qubit >= state.n_qubits()) {
        throw InvalidInputError("qubit " + std::to_string(qubit) +
                                " out of range");
    }
    const std::size_t bit = std::size_t{1} << qubit;
    const auto amps = state.amplitudes();
    double z = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        z += (i & bit) ? -p : p;
    }
    return z;
}

std::vector<double> kept_expectations(const QuantumState &state,
                                      const CircuitSpec &circuit) {
    std::vector<double> out;
    out.reserve(circuit.kept_qubits.size());
    for (auto q : circuit.kept_qubits) {
        out.push_back(expectation_z(state, q));
    }
    return out;
}

ExpectationGradients expectation_gradients(const CircuitSpec &circuit,
                                           const ParameterSet &params,
                                           const QuantumState &input) {
    return adjoint_sweep(circuit, params, input, nullptr);
}

ExpectationGradients expectation_gradients(const CircuitSpec &circuit,
                                           const ParameterSet &params,
                                           std::span<const double> raw_inputs) {
    if (!is_power_of_two(raw_inputs.size())) {
        throw InvalidInputError("raw input count is not a power of two");
    }
    const auto m = static_cast<std::size_t>(std::countr_zero(raw_inputs.size()));
    double norm2 = 0.0;
    for (double v : raw_inputs) {
        norm2 += v * v;
    }
    if (norm2 == 0.0) {
        throw DegenerateInputError(
            "input Jacobian is undefined for an all-zero input vector");
    }
    const QuantumState input = amplitude_encode(raw_inputs, m, circuit.n_qubits);

    std::vector<std::vector<Complex>> cotangents;
    ExpectationGradients out = adjoint_sweep(circuit, params, input, &cotangents);

    // d<Z>/dx = (I - psi psi^T) g / ||x||, with g_i = 2 Re(lambda_i) the
    // gradient with respect to the (real) encoded amplitudes psi_i.
    const double norm = std::sqrt(norm2);
    const std::size_t n_in = raw_inputs.size();
    out.inputs = Matrix(cotangents.size(), n_in);
    for (std::size_t k = 0; k < cotangents.size(); ++k) {
        double g_dot_psi = 0.0;
        for (std::size_t i = 0; i < n_in; ++i) {
            g_dot_psi += 2.0 * cotangents[k][i].real() * (raw_inputs[i] / norm);
        }
        for (std::size_t i = 0; i < n_in; ++i) {
            const double g = 2.0 * cotangents[k][i].real();
            out.inputs(k, i) = (g - g_dot_psi * raw_inputs[i] / norm) / norm;
        }
    }
    return out;
}

Matrix grad_expectation_params(const CircuitSpec &circuit,
                               const ParameterSet &params,
                               const QuantumState &input) {
    return expectation_gradients(circuit, params, input).params;
}

Matrix grad_expectation_params(const CircuitSpec &circuit,
                               const ParameterSet &params,
                               const QuantumState &input,
                               std::span<const ParamRef> wrt) {
    std::vector<std::size_t> cols;
    cols.reserve(wrt.size());
    for (const auto &ref : wrt) {
        const auto col = params.flat_index(ref);
        if (!col) {
            throw ContractError("gradient requested for a frozen or unknown "
                                "parameter slot");
        }
        cols.push_back(*col);
    }
    const Matrix full = grad_expectation_params(circuit, params, input);
    Matrix out(full.rows(), cols.size());
    for (std::size_t k = 0; k < full.rows(); ++k) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out(k, j) = full(k, cols[j]);
        }
    }
    return out;
}

Matrix grad_expectation_inputs(const CircuitSpec &circuit,
                               const ParameterSet &params,
                               std::span<const double> raw_inputs) {
    return expectation_gradients(circuit, params, raw_inputs).inputs;
}

} // namespace qpatch
