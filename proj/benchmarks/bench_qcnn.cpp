// Copyright 2026 The qcnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <numbers>
#include <random>

#include <benchmark/benchmark.h>

#include "qcnn/circuit.hpp"
#include "qcnn/grad.hpp"
#include "qcnn/imgproc.hpp"
#include "qcnn/nn.hpp"
#include "qcnn/train.hpp"

namespace {

using namespace qcnn;

struct Fixture {
    circuit::Qcnn q;
    circuit::QcnnParams params;
    std::vector<double> latent;
    circuit::Readout upstream{0.3, -0.7, 0.2, 0.9};

    explicit Fixture(std::size_t qubits)
        : q(circuit::QcnnConfig::for_qubits(qubits)), params(q.config()),
          latent(q.config().latent_dim()) {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
        for (auto &v : params.values()) {
            v = u(rng);
        }
        for (auto &v : latent) {
            v = std::abs(u(rng));
        }
    }
};

void BM_Forward(benchmark::State &state) {
    const Fixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(f.q.run(f.latent, f.params));
    }
}
BENCHMARK(BM_Forward)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_Adjoint(benchmark::State &state) {
    const Fixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(grad::adjoint(f.q, f.latent, f.params, f.upstream));
    }
}
BENCHMARK(BM_Adjoint)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ParameterShift(benchmark::State &state) {
    const Fixture f(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            grad::parameter_shift(f.q, f.latent, f.params, f.upstream));
    }
}
BENCHMARK(BM_ParameterShift)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_SampleGradient(benchmark::State &state) {
    train::TrainConfig cfg;
    cfg.qubits = 12;
    const train::Model model(cfg);
    const auto st = train::init_state(cfg, 2048);
    std::vector<double> feature(2048, 0.01);
    const data::ClassWeights w{1, 1, 1, 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            train::sample_gradient(model, st.qparams, st.head, feature, 1, w));
    }
}
BENCHMARK(BM_SampleGradient)->Unit(benchmark::kMillisecond);

img::GrayImage noise(std::size_t side) {
    std::mt19937_64 rng(2);
    img::GrayImage g(side, side);
    for (auto &p : g.data) {
        p = static_cast<std::uint8_t>(rng() % 256);
    }
    return g;
}

void BM_Nlm(benchmark::State &state) {
    const auto g = noise(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(img::nlm_denoise(g));
    }
}
BENCHMARK(BM_Nlm)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Clahe(benchmark::State &state) {
    const auto g = noise(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(img::clahe(g));
    }
}
BENCHMARK(BM_Clahe)->Arg(512)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
