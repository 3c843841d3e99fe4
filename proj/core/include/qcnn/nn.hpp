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
 * @file nn.hpp
 * Classical pieces of the hybrid model: the projection head
 * (features -> hidden -> latent), latent rescaling to [0, pi], the classifier
 * MLP on the ancilla readout, class-weighted cross-entropy and Adam.
 */
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace qcnn::nn {

inline constexpr std::size_t kNumClasses = 4;
using ClassVector = std::array<double, kNumClasses>;

enum class HeadLayer : std::size_t { Proj1, Proj2, Mlp1, Mlp2, Mlp3 };
inline constexpr std::size_t kNumHeadLayers = 5;

struct HeadShape {
    std::size_t feature_dim = 2048;
    std::size_t proj_hidden = 256;
    std::size_t latent = 8;
    std::size_t mlp_hidden1 = 16;
    std::size_t mlp_hidden2 = 8;

    [[nodiscard]] std::size_t in_dim(HeadLayer layer) const;
    [[nodiscard]] std::size_t out_dim(HeadLayer layer) const;
    bool operator==(const HeadShape &) const = default;
};

/// Weights (out x in, row-major) and biases of all five linear layers in one
/// contiguous buffer, so optimizers can treat them as a flat vector.
class HeadParams {
  public:
    explicit HeadParams(const HeadShape &shape);

    [[nodiscard]] const HeadShape &shape() const noexcept { return shape_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    [[nodiscard]] std::span<double> values() noexcept { return data_; }
    [[nodiscard]] std::span<const double> values() const noexcept {
        return data_;
    }

    [[nodiscard]] std::span<double> weight(HeadLayer layer);
    [[nodiscard]] std::span<const double> weight(HeadLayer layer) const;
    [[nodiscard]] std::span<double> bias(HeadLayer layer);
    [[nodiscard]] std::span<const double> bias(HeadLayer layer) const;

    /// Offset of the first projection-head value past Proj2 (the MLP block
    /// occupies [mlp_offset(), size())).
    [[nodiscard]] std::size_t mlp_offset() const noexcept;

    void fill(double v);
    bool operator==(const HeadParams &) const = default;

  private:
    HeadShape shape_;
    std::vector<double> data_;
    std::array<std::size_t, kNumHeadLayers> w_off_{};
    std::array<std::size_t, kNumHeadLayers> b_off_{};
};

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
HeadParams init_head(const HeadShape &shape, std::mt19937_64 &rng);

/// Activations kept from the forward pass for backward_head.
struct HeadCache {
    std::vector<double> feature;
    std::vector<double> proj_pre; // hidden pre-activation
    std::vector<double> proj_act;
    std::vector<double> raw;      // latent before rescaling
    ClassVector readout{};
    std::vector<double> mlp_pre1, mlp_act1, mlp_pre2, mlp_act2;
    ClassVector logits{};
    bool has_projection = false;
    bool has_mlp = false;
};

/// linear -> ReLU -> linear. Throws ConfigError on a feature-size mismatch.
std::vector<double> project(std::span<const double> feature,
                            const HeadParams &head, HeadCache *cache = nullptr);
std::vector<double> project(std::span<const float> feature,
                            const HeadParams &head, HeadCache *cache = nullptr);

/// pi * sigmoid(raw), elementwise.
std::vector<double> rescale_latent(std::span<const double> raw);
/// d/d(raw) of pi * sigmoid(raw).
double rescale_derivative(double raw);

/// linear -> ReLU -> linear -> ReLU -> linear.
ClassVector mlp_forward(const ClassVector &readout, const HeadParams &head,
                        HeadCache *cache = nullptr);

ClassVector softmax(const ClassVector &logits);

struct LossResult {
    double loss = 0.0;
    ClassVector d_logits{};
};

/// w[label] * -log softmax(logits)[label] and its gradient. Throws
/// NumericError on non-finite logits, ConfigError on bad label/weights.
LossResult weighted_cross_entropy(const ClassVector &logits, std::size_t label,
                                  const ClassVector &class_weights);

/// Accumulates MLP gradients into `grads`; returns d(loss)/d(readout).
ClassVector mlp_backward(const HeadCache &cache, const ClassVector &d_logits,
                         const HeadParams &head, HeadParams &grads);

/// Accumulates projection gradients into `grads` given d(loss)/d(raw).
void project_backward(const HeadCache &cache, std::span<const double> d_raw,
                      const HeadParams &head, HeadParams &grads);

/// Gradients of every head parameter for one sample. Throws UsageError if
/// the cache lacks either forward pass.
HeadParams backward_head(const HeadCache &cache, const HeadParams &head,
                         std::span<const double> d_latent_raw,
                         const ClassVector &d_logits);

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    bool operator==(const AdamConfig &) const = default;
};

struct AdamState {
    AdamConfig config;
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t step = 0;

    AdamState() = default;
    AdamState(std::size_t n, const AdamConfig &cfg)
        : config(cfg), m(n, 0.0), v(n, 0.0) {}
    bool operator==(const AdamState &) const = default;
};

/// Bias-corrected Adam update in place.
void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState &state);

} // namespace qcnn::nn
