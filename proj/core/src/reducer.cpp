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
#include "qpatch/reducer.hpp"

#include "qpatch/error.hpp"
#include "qpatch/statevec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace qpatch {
namespace {

std::size_t qubits_for_patch(std::size_t r) {
    const std::size_t area = r * r;
    if (r == 0 || !std::has_single_bit(area)) {
        throw ConfigurationError("patch area " + std::to_string(area) +
                                 " is not a power of two");
    }
    return static_cast<std::size_t>(std::countr_zero(area));
}

std::vector<Qubit> first_qubits(std::size_t m) {
    std::vector<Qubit> q(m);
    std::iota(q.begin(), q.end(), Qubit{0});
    return q;
}

void require_halvable(std::size_t m) {
    if (!std::has_single_bit(m)) {
        throw ConfigurationError(
            "reducer needs a power-of-two qubit count to halve down to one "
            "qubit; got " +
            std::to_string(m));
    }
}

void add_pool(BuiltCircuit &built, std::vector<Qubit> &active, bool shared,
              const std::string &group) {
    PoolLayer pool = build_pool_layer(active, shared, built.params, group);
    built.circuit.append(pool.gates);
    for (auto q : pool.dropped) {
        built.circuit.discard(q);
    }
    active = std::move(pool.kept);
}

} // namespace

const char *to_string(ReducerKind kind) noexcept {
    return kind == ReducerKind::Proposed ? "proposed" : "naive-pool";
}

PatchGrid extract_patches(const Matrix &image, std::size_t r) {
    if (image.rows() != image.cols()) {
        throw ConfigurationError("image must be square");
    }
    const std::size_t n = image.rows();
    if (r == 0 || n % r != 0) {
        throw ConfigurationError("patch side " + std::to_string(r) +
                                 " does not divide image side " +
                                 std::to_string(n));
    }
    qubits_for_patch(r);
    PatchGrid grid{n, r, n / r, {}};
    grid.patches.reserve(grid.grid * grid.grid);
    for (std::size_t p = 0; p < grid.grid; ++p) {
        for (std::size_t q = 0; q < grid.grid; ++q) {
            std::vector<double> patch;
            patch.reserve(r * r);
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t j = 0; j < r; ++j) {
                    patch.push_back(image(p * r + i, q * r + j));
                }
            }
            grid.patches.push_back(std::move(patch));
        }
    }
    return grid;
}

Matrix reassemble(const PatchGrid &grid) {
    Matrix image(grid.side, grid.side);
    for (std::size_t p = 0; p < grid.grid; ++p) {
        for (std::size_t q = 0; q < grid.grid; ++q) {
            const auto &patch = grid.at(p, q);
            for (std::size_t i = 0; i < grid.patch; ++i) {
                for (std::size_t j = 0; j < grid.patch; ++j) {
                    image(p * grid.patch + i, q * grid.patch + j) =
                        patch[i * grid.patch + j];
                }
            }
        }
    }
    return image;
}

double attention_mask(std::span<const double> patch) {
    double sum = 0.0;
    double max = 0.0;
    for (double x : patch) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw ContractError("attention mask expects finite non-negative "
                                "pixel values");
        }
        sum += x;
        max = std::max(max, x);
    }
    if (max == 0.0) {
        return 0.0;
    }
    const auto k = static_cast<double>(patch.size());
    const double index_sum = k * (k + 1.0) / 2.0;
    return sum / (max * index_sum);
}

BuiltCircuit build_reducer_circuit(std::size_t r, const SharingPolicy &policy) {
    const std::size_t m = qubits_for_patch(r);
    require_halvable(m);
    BuiltCircuit built;
    built.circuit.n_qubits = m;
    std::vector<Qubit> active = first_qubits(m);
    for (std::size_t layer = 0; active.size() > 1; ++layer) {
        const std::string suffix = std::to_string(layer);
        built.circuit.append(build_conv_layer(active, policy.reducer_conv_shared,
                                              built.params,
                                              "reducer.conv" + suffix));
        add_pool(built, active, policy.reducer_pool_shared,
                 "reducer.pool" + suffix);
    }
    built.circuit.kept_qubits = active;
    built.circuit.validate();
    return built;
}

BuiltCircuit build_naive_pool_reducer(std::size_t r, const SharingPolicy &policy) {
    const std::size_t m = qubits_for_patch(r);
    require_halvable(m);
    BuiltCircuit built;
    built.circuit.n_qubits = m;
    std::vector<Qubit> active = first_qubits(m);
    for (std::size_t layer = 0; active.size() > 1; ++layer) {
        add_pool(built, active, policy.reducer_pool_shared,
                 "reducer.pool" + std::to_string(layer));
    }
    built.circuit.kept_qubits = active;
    built.circuit.validate();
    return built;
}

BuiltCircuit build_reducer(ReducerKind kind, std::size_t r,
                           const SharingPolicy &policy) {
    return kind == ReducerKind::Proposed ? build_reducer_circuit(r, policy)
                                         : build_naive_pool_reducer(r, policy);
}

std::size_t patch_side(const CircuitSpec &reducer) {
    if (reducer.n_qubits % 2 != 0) {
        throw ConfigurationError("reducer register must have an even qubit count");
    }
    return std::size_t{1} << (reducer.n_qubits / 2);
}

double reduce_patch(std::span<const double> patch, const CircuitSpec &circuit,
                    const ParameterSet &params) {
    QuantumState state = amplitude_encode(patch, circuit.n_qubits);
    apply_circuit_inplace(state, circuit, params);
    return expectation_z(state, circuit.kept_qubits.front());
}

ReducedFeatureMatrix reduce_image(const Matrix &image, const CircuitSpec &circuit,
                                  const ParameterSet &params) {
    const PatchGrid grid = extract_patches(image, patch_side(circuit));
    ReducedFeatureMatrix out{Matrix(grid.grid, grid.grid),
                             Matrix(grid.grid, grid.grid),
                             Matrix(grid.grid, grid.grid)};
    for (std::size_t p = 0; p < grid.grid; ++p) {
        for (std::size_t q = 0; q < grid.grid; ++q) {
            const auto &patch = grid.at(p, q);
            const double z = reduce_patch(patch, circuit, params);
            const double y = attention_mask(patch);
            out.quantum_part(p, q) = z;
            out.mask_part(p, q) = y;
            out.gamma(p, q) = z * y;
        }
    }
    return out;
}

ReducedWithGrads reduce_image_with_grads(const Matrix &image,
                                         const CircuitSpec &circuit,
                                         const ParameterSet &params) {
    const PatchGrid grid = extract_patches(image, patch_side(circuit));
    const std::size_t n_patches = grid.patches.size();
    const std::size_t n_params = params.total_trainable();
    ReducedWithGrads out{{Matrix(grid.grid, grid.grid),
                          Matrix(grid.grid, grid.grid),
                          Matrix(grid.grid, grid.grid)},
                         Matrix(n_patches, n_params),
                         Matrix(n_patches, n_params)};
    for (std::size_t k = 0; k < n_patches; ++k) {
        const std::size_t p = k / grid.grid;
        const std::size_t q = k % grid.grid;
        const auto &patch = grid.patches[k];
        const QuantumState input = amplitude_encode(patch, circuit.n_qubits);
        const ExpectationGradients g = expectation_gradients(circuit, params, input);
        const double z = g.expectations.front();
        const double y = attention_mask(patch);
        out.features.quantum_part(p, q) = z;
        out.features.mask_part(p, q) = y;
        out.features.gamma(p, q) = z * y;
        for (std::size_t j = 0; j < n_params; ++j) {
            out.quantum_grad(k, j) = g.params(0, j);
            out.gamma_grad(k, j) = y * g.params(0, j);
        }
    }
    return out;
}

} // namespace qpatch
