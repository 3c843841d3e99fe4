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

#include "qcnn/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qcnn/errors.hpp"

namespace qcnn::nn {
namespace {

constexpr std::size_t idx(HeadLayer l) { return static_cast<std::size_t>(l); }

/// out = W x + b
template <typename T>
void affine(std::span<const double> w, std::span<const double> b,
            std::span<const T> x, std::vector<double> &out) {
    const std::size_t n_out = b.size();
    const std::size_t n_in = x.size();
    out.resize(n_out);
    for (std::size_t r = 0; r < n_out; ++r) {
        const double *row = w.data() + r * n_in;
        double s = 0.0;
        for (std::size_t c = 0; c < n_in; ++c) {
            s += row[c] * static_cast<double>(x[c]);
        }
        out[r] = s + b[r];
    }
}

void relu(const std::vector<double> &pre, std::vector<double> &act) {
    act.resize(pre.size());
    std::transform(pre.begin(), pre.end(), act.begin(),
                   [](double v) { return v > 0.0 ? v : 0.0; });
}

/// Accumulates dW += dy x^T, db += dy and returns W^T dy (if wanted).
void linear_backward(std::span<const double> w, std::span<const double> x,
                     std::span<const double> dy, std::span<double> dw,
                     std::span<double> db, std::vector<double> *dx) {
    const std::size_t n_out = dy.size();
    const std::size_t n_in = x.size();
    if (dx) {
        dx->assign(n_in, 0.0);
    }
    for (std::size_t r = 0; r < n_out; ++r) {
        const double g = dy[r];
        if (g == 0.0) {
            continue;
        }
        db[r] += g;
        double *drow = dw.data() + r * n_in;
        const double *wrow = w.data() + r * n_in;
        for (std::size_t c = 0; c < n_in; ++c) {
            drow[c] += g * x[c];
        }
        if (dx) {
            for (std::size_t c = 0; c < n_in; ++c) {
                (*dx)[c] += g * wrow[c];
            }
        }
    }
}

/// dpre = dact where pre > 0 (subgradient 0 at 0).
std::vector<double> relu_backward(const std::vector<double> &pre,
                                  const std::vector<double> &dact) {
    std::vector<double> d(pre.size());
    for (std::size_t i = 0; i < pre.size(); ++i) {
        d[i] = pre[i] > 0.0 ? dact[i] : 0.0;
    }
    return d;
}

template <typename T>
std::vector<double> project_impl(std::span<const T> feature,
                                 const HeadParams &head, HeadCache *cache) {
    const auto &shape = head.shape();
    if (feature.size() != shape.feature_dim) {
        throw ConfigError("feature length " + std::to_string(feature.size()) +
                          " != head input " +
                          std::to_string(shape.feature_dim));
    }
    std::vector<double> pre, act, raw;
    affine(head.weight(HeadLayer::Proj1), head.bias(HeadLayer::Proj1), feature,
           pre);
    relu(pre, act);
    affine<double>(head.weight(HeadLayer::Proj2), head.bias(HeadLayer::Proj2),
                   act, raw);
    if (cache) {
        cache->feature.assign(feature.begin(), feature.end());
        cache->proj_pre = std::move(pre);
        cache->proj_act = std::move(act);
        cache->raw = raw;
        cache->has_projection = true;
    }
    return raw;
}

} // namespace

std::size_t HeadShape::in_dim(HeadLayer layer) const {
    switch (layer) {
    case HeadLayer::Proj1:
        return feature_dim;
    case HeadLayer::Proj2:
        return proj_hidden;
    case HeadLayer::Mlp1:
        return kNumClasses;
    case HeadLayer::Mlp2:
        return mlp_hidden1;
    case HeadLayer::Mlp3:
        return mlp_hidden2;
    }
    return 0;
}

std::size_t HeadShape::out_dim(HeadLayer layer) const {
    switch (layer) {
    case HeadLayer::Proj1:
        return proj_hidden;
    case HeadLayer::Proj2:
        return latent;
    case HeadLayer::Mlp1:
        return mlp_hidden1;
    case HeadLayer::Mlp2:
        return mlp_hidden2;
    case HeadLayer::Mlp3:
        return kNumClasses;
    }
    return 0;
}

HeadParams::HeadParams(const HeadShape &shape) : shape_(shape) {
    if (shape.feature_dim == 0 || shape.proj_hidden == 0 || shape.latent == 0 ||
        shape.mlp_hidden1 == 0 || shape.mlp_hidden2 == 0) {
        throw ConfigError("head dimensions must be positive");
    }
    std::size_t off = 0;
    for (std::size_t l = 0; l < kNumHeadLayers; ++l) {
        const auto layer = static_cast<HeadLayer>(l);
        w_off_[l] = off;
        off += shape.in_dim(layer) * shape.out_dim(layer);
        b_off_[l] = off;
        off += shape.out_dim(layer);
    }
    data_.assign(off, 0.0);
}

std::span<double> HeadParams::weight(HeadLayer layer) {
    return std::span<double>(data_).subspan(
        w_off_[idx(layer)], shape_.in_dim(layer) * shape_.out_dim(layer));
}
std::span<const double> HeadParams::weight(HeadLayer layer) const {
    return std::span<const double>(data_).subspan(
        w_off_[idx(layer)], shape_.in_dim(layer) * shape_.out_dim(layer));
}
std::span<double> HeadParams::bias(HeadLayer layer) {
    return std::span<double>(data_).subspan(b_off_[idx(layer)],
                                            shape_.out_dim(layer));
}
std::span<const double> HeadParams::bias(HeadLayer layer) const {
    return std::span<const double>(data_).subspan(b_off_[idx(layer)],
                                                  shape_.out_dim(layer));
}

std::size_t HeadParams::mlp_offset() const noexcept {
    return w_off_[idx(HeadLayer::Mlp1)];
}

void HeadParams::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

HeadParams init_head(const HeadShape &shape, std::mt19937_64 &rng) {
    HeadParams head(shape);
    for (std::size_t l = 0; l < kNumHeadLayers; ++l) {
        const auto layer = static_cast<HeadLayer>(l);
        const double bound =
            1.0 / std::sqrt(static_cast<double>(shape.in_dim(layer)));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (auto &w : head.weight(layer)) {
            w = dist(rng);
        }
        for (auto &b : head.bias(layer)) {
            b = dist(rng);
        }
    }
    return head;
}

std::vector<double> project(std::span<const double> feature,
                            const HeadParams &head, HeadCache *cache) {
    return project_impl(feature, head, cache);
}

std::vector<double> project(std::span<const float> feature,
                            const HeadParams &head, HeadCache *cache) {
    return project_impl(feature, head, cache);
}

std::vector<double> rescale_latent(std::span<const double> raw) {
    std::vector<double> z(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!std::isfinite(raw[i])) {
            throw NumericError("latent value is not finite");
        }
        z[i] = std::numbers::pi / (1.0 + std::exp(-raw[i]));
    }
    return z;
}

double rescale_derivative(double raw) {
    const double s = 1.0 / (1.0 + std::exp(-raw));
    return std::numbers::pi * s * (1.0 - s);
}

ClassVector mlp_forward(const ClassVector &readout, const HeadParams &head,
                        HeadCache *cache) {
    std::vector<double> pre1, act1, pre2, act2, out;
    const std::span<const double> x(readout);
    affine(head.weight(HeadLayer::Mlp1), head.bias(HeadLayer::Mlp1), x, pre1);
    relu(pre1, act1);
    affine<double>(head.weight(HeadLayer::Mlp2), head.bias(HeadLayer::Mlp2),
                   act1, pre2);
    relu(pre2, act2);
    affine<double>(head.weight(HeadLayer::Mlp3), head.bias(HeadLayer::Mlp3),
                   act2, out);
    ClassVector logits{};
    std::copy(out.begin(), out.end(), logits.begin());
    if (cache) {
        cache->readout = readout;
        cache->mlp_pre1 = std::move(pre1);
        cache->mlp_act1 = std::move(act1);
        cache->mlp_pre2 = std::move(pre2);
        cache->mlp_act2 = std::move(act2);
        cache->logits = logits;
        cache->has_mlp = true;
    }
    return logits;
}

ClassVector softmax(const ClassVector &logits) {
    const double mx = *std::max_element(logits.begin(), logits.end());
    ClassVector p{};
    double s = 0.0;
    for (std::size_t i = 0; i < kNumClasses; ++i) {
        p[i] = std::exp(logits[i] - mx);
        s += p[i];
    }
    for (auto &v : p) {
        v /= s;
    }
    return p;
}

LossResult weighted_cross_entropy(const ClassVector &logits, std::size_t label,
                                  const ClassVector &class_weights) {
    if (label >= kNumClasses) {
        throw ConfigError("label " + std::to_string(label) + " out of range");
    }
    for (const double w : class_weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw ConfigError("class weights must be positive and finite");
        }
    }
    for (const double z : logits) {
        if (!std::isfinite(z)) {
            throw NumericError("non-finite logit");
        }
    }
    const double mx = *std::max_element(logits.begin(), logits.end());
    double s = 0.0;
    for (const double z : logits) {
        s += std::exp(z - mx);
    }
    const double log_p = logits[label] - mx - std::log(s);
    const double w = class_weights[label];
    LossResult r;
    r.loss = -w * log_p;
    const ClassVector p = softmax(logits);
    for (std::size_t i = 0; i < kNumClasses; ++i) {
        r.d_logits[i] = w * (p[i] - (i == label ? 1.0 : 0.0));
    }
    return r;
}

ClassVector mlp_backward(const HeadCache &cache, const ClassVector &d_logits,
                         const HeadParams &head, HeadParams &grads) {
    if (!cache.has_mlp) {
        throw UsageError("mlp_backward called without a cached forward pass");
    }
    std::vector<double> d_act2, d_act1, d_x;
    linear_backward(head.weight(HeadLayer::Mlp3), cache.mlp_act2, d_logits,
                    grads.weight(HeadLayer::Mlp3), grads.bias(HeadLayer::Mlp3),
                    &d_act2);
    const auto d_pre2 = relu_backward(cache.mlp_pre2, d_act2);
    linear_backward(head.weight(HeadLayer::Mlp2), cache.mlp_act1, d_pre2,
                    grads.weight(HeadLayer::Mlp2), grads.bias(HeadLayer::Mlp2),
                    &d_act1);
    const auto d_pre1 = relu_backward(cache.mlp_pre1, d_act1);
    linear_backward(head.weight(HeadLayer::Mlp1), cache.readout, d_pre1,
                    grads.weight(HeadLayer::Mlp1), grads.bias(HeadLayer::Mlp1),
                    &d_x);
    ClassVector d_readout{};
    std::copy(d_x.begin(), d_x.end(), d_readout.begin());
    return d_readout;
}

void project_backward(const HeadCache &cache, std::span<const double> d_raw,
                      const HeadParams &head, HeadParams &grads) {
    if (!cache.has_projection) {
        throw UsageError(
            "project_backward called without a cached forward pass");
    }
    if (d_raw.size() != head.shape().latent) {
        throw ConfigError("latent gradient has wrong length");
    }
    std::vector<double> d_act;
    linear_backward(head.weight(HeadLayer::Proj2), cache.proj_act, d_raw,
                    grads.weight(HeadLayer::Proj2), grads.bias(HeadLayer::Proj2),
                    &d_act);
    const auto d_pre = relu_backward(cache.proj_pre, d_act);
    linear_backward(head.weight(HeadLayer::Proj1), cache.feature, d_pre,
                    grads.weight(HeadLayer::Proj1), grads.bias(HeadLayer::Proj1),
                    nullptr);
}

HeadParams backward_head(const HeadCache &cache, const HeadParams &head,
                         std::span<const double> d_latent_raw,
                         const ClassVector &d_logits) {
    if (!cache.has_projection || !cache.has_mlp) {
        throw UsageError("backward_head needs both forward passes cached");
    }
    HeadParams grads(head.shape());
    mlp_backward(cache, d_logits, head, grads);
    project_backward(cache, d_latent_raw, head, grads);
    return grads;
}

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState &state) {
    if (params.size() != grads.size() || state.m.size() != params.size() ||
        state.v.size() != params.size()) {
        throw ConfigError("Adam: parameter, gradient and moment sizes differ");
    }
    const auto &c = state.config;
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double bc1 = 1.0 - std::pow(c.beta1, t);
    const double bc2 = 1.0 - std::pow(c.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * g;
        state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * g * g;
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
    }
}

} // namespace qcnn::nn
