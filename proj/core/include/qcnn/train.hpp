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

/**
 * @file train.hpp
 * Hybrid training loop: projection head -> QCNN -> MLP -> weighted
 * cross-entropy, with per-batch Adam updates, evaluation and fit().
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcnn/circuit.hpp"
#include "qcnn/data.hpp"
#include "qcnn/imgproc.hpp"
#include "qcnn/metrics.hpp"
#include "qcnn/nn.hpp"

namespace qcnn::train {

enum class GradMethod { Adjoint, Shift };

std::string_view grad_method_name(GradMethod m);
/// "adjoint" or "shift"; throws ConfigError otherwise.
GradMethod parse_grad_method(std::string_view name);

struct TrainConfig {
    std::size_t qubits = 12;
    double lr = 0.001;
    std::size_t batch = 8;
    std::size_t epochs = 100;
    std::size_t n_max = 1000;
    std::uint64_t seed = 0;
    /// Keeps the 2048 -> 256 -> L projection at its initial values.
    bool freeze_head = false;
    GradMethod grad = GradMethod::Adjoint;
    /// Worker cap; results do not depend on it.
    std::size_t threads = 1;
    /// Image-level augmentation, applied by `preprocess --augment`.
    img::AugmentConfig augment;

    [[nodiscard]] std::size_t latent_dim() const { return qubits - 4; }
    [[nodiscard]] std::size_t draws_per_epoch() const { return n_max * 4; }
    [[nodiscard]] std::size_t steps_per_epoch() const {
        return (draws_per_epoch() + batch - 1) / batch;
    }
    [[nodiscard]] circuit::QcnnConfig circuit_config() const;
    [[nodiscard]] nn::HeadShape head_shape(std::size_t feature_dim) const;
    /// Throws ConfigError.
    void validate() const;
};

struct EpochStats {
    std::size_t epoch = 0; // 1-based
    double train_loss = 0.0;
    double train_acc = 0.0;
    double val_loss = 0.0;
    double val_acc = 0.0;
    std::size_t steps = 0;

    bool operator==(const EpochStats &) const = default;
};

/// Everything that evolves during training.
struct TrainState {
    TrainState(const TrainConfig &cfg, std::size_t feature_dim);

    circuit::QcnnParams qparams;
    nn::HeadParams head;
    nn::AdamState adam_quantum;
    nn::AdamState adam_head;
    std::mt19937_64 rng;
    std::size_t epoch = 0; // completed epochs
    std::vector<EpochStats> history;
    std::size_t best_epoch = 0;
    double best_val_acc = -1.0;
};

/// Seeded initialization: head uniform(+-1/sqrt(fan_in)), circuit angles
/// uniform(-0.1, 0.1).
TrainState init_state(const TrainConfig &cfg, std::size_t feature_dim);

/// Compiled, immutable pieces shared by all samples.
class Model {
  public:
    explicit Model(const TrainConfig &cfg);
    [[nodiscard]] const circuit::Qcnn &qcnn() const noexcept { return qcnn_; }

  private:
    circuit::Qcnn qcnn_;
};

/// Logits for one feature vector.
nn::ClassVector predict(const Model &model, const circuit::QcnnParams &qparams,
                        const nn::HeadParams &head,
                        std::span<const double> feature);

/// Weighted CE for one sample.
double sample_loss(const Model &model, const circuit::QcnnParams &qparams,
                   const nn::HeadParams &head, std::span<const double> feature,
                   std::size_t label, const data::ClassWeights &weights);

struct SampleGradient {
    double loss = 0.0;
    nn::ClassVector logits{};
    std::vector<double> d_qparams;
    nn::HeadParams d_head;
};

/// Loss and full chain-rule gradient for one sample.
SampleGradient sample_gradient(const Model &model,
                               const circuit::QcnnParams &qparams,
                               const nn::HeadParams &head,
                               std::span<const double> feature,
                               std::size_t label,
                               const data::ClassWeights &weights,
                               GradMethod method = GradMethod::Adjoint);

/// Runs `fn(i)` for i in [0, n) on up to `threads` workers. The first
/// exception (by index) is rethrown.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)> &fn);

struct EpochResult {
    double loss = 0.0;
    double accuracy = 0.0;
    std::size_t steps = 0;
};

/// One epoch over `cfg.n_max * 4` weighted draws. Throws NumericError with a
/// dump of the batch if a loss is non-finite.
EpochResult train_epoch(const Model &model, TrainState &state,
                        const data::FeatureSet &train,
                        const data::ClassWeights &weights,
                        const TrainConfig &cfg);

struct EvalResult {
    metrics::Metrics metrics;
    double loss = 0.0;
    std::vector<std::size_t> predictions;
};

/// Read-only pass. Throws ConfigError on an empty set.
EvalResult evaluate(const Model &model, const TrainState &state,
                    const data::FeatureSet &set,
                    const data::ClassWeights &weights, std::size_t threads = 1);

struct FitOptions {
    std::filesystem::path out_dir;
    /// Continue from this checkpoint instead of initializing.
    std::optional<std::filesystem::path> resume;
    /// Stop after this many epochs have completed in total (0: run all).
    std::size_t stop_after = 0;
    std::function<void(const EpochStats &)> on_epoch;
};

struct FitResult {
    bool completed = false;
    std::size_t best_epoch = 0;
    EvalResult test;
};

inline constexpr std::string_view kBestCheckpoint = "checkpoint_best.json";
inline constexpr std::string_view kLastCheckpoint = "checkpoint_last.json";

/// Trains, validates every epoch, keeps best and last checkpoints, then
/// evaluates the best checkpoint on `test` and writes the report bundle.
FitResult fit(const TrainConfig &cfg, const data::FeatureSet &train,
              const data::FeatureSet &val, const data::FeatureSet &test,
              const FitOptions &options);

} // namespace qcnn::train
