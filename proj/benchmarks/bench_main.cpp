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
#include "qpatch/reducer.hpp"
#include "qpatch/statevec.hpp"
#include "qpatch/train.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace qpatch;

Matrix random_image(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    Matrix m(32, 32);
    for (std::size_t r = 2; r < 30; ++r) {
        for (std::size_t c = 2; c < 30; ++c) {
            m(r, c) = d(rng);
        }
    }
    return m;
}

Model seeded_model(ClassifierKind kind) {
    TrainConfig c;
    c.classifier_kind = kind;
    Model m = build_model(c);
    initialize_parameters(m, 1);
    return m;
}

void BM_ReducerPatchForward(benchmark::State &state) {
    const Model m = seeded_model(ClassifierKind::Quantum);
    const std::vector<double> patch(16, 0.4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduce_patch(patch, m.reducer.circuit, m.reducer.params));
    }
}
BENCHMARK(BM_ReducerPatchForward);

void BM_ClassifierForward(benchmark::State &state) {
    const Model m = seeded_model(ClassifierKind::Quantum);
    const auto gamma = reduce_image(random_image(2), m.reducer.circuit, m.reducer.params).gamma;
    for (auto _ : state) {
        benchmark::DoNotOptimize(m.classifier.forward(gamma));
    }
}
BENCHMARK(BM_ClassifierForward);

void BM_ClassifierAdjoint(benchmark::State &state) {
    const Model m = seeded_model(ClassifierKind::Quantum);
    const auto gamma = reduce_image(random_image(3), m.reducer.circuit, m.reducer.params).gamma;
    for (auto _ : state) {
        benchmark::DoNotOptimize(m.classifier.forward_with_grads(gamma));
    }
}
BENCHMARK(BM_ClassifierAdjoint);

void BM_ReduceImageWithGrads(benchmark::State &state) {
    const Model m = seeded_model(ClassifierKind::Quantum);
    const Matrix img = random_image(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduce_image_with_grads(img, m.reducer.circuit, m.reducer.params));
    }
}
BENCHMARK(BM_ReduceImageWithGrads);

void BM_SampleGradient(benchmark::State &state) {
    const Model m = seeded_model(static_cast<ClassifierKind>(state.range(0)));
    PreparedSample s;
    s.image = random_image(5);
    s.label_onehot = {1.0, 0.0};
    const std::vector<PreparedSample> one{s};
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_gradients(one, m));
    }
}
BENCHMARK(BM_SampleGradient)->Arg(0)->Arg(1);

void BM_StatevecGate(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    QuantumState s(n);
    const GateOp h = make_gate(GateKind::H, {0});
    for (auto _ : state) {
        apply_gate_inplace(s, h);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.dimension()));
}
BENCHMARK(BM_StatevecGate)->Arg(4)->Arg(8)->Arg(16);

} // namespace

BENCHMARK_MAIN();
