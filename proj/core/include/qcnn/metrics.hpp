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
 * @file metrics.hpp
 * Confusion matrix and the precision/recall/F1 family derived from it.
 */

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "qcnn/nn.hpp"

namespace qcnn::metrics {

inline constexpr std::size_t kNumClasses = nn::kNumClasses;

/// Rows are true classes, columns predicted classes.
using Confusion = std::array<std::array<std::int64_t, kNumClasses>, kNumClasses>;
using PerClass = std::array<double, kNumClasses>;

struct Metrics {
    Confusion confusion{};
    std::array<std::int64_t, kNumClasses> support{};
    std::int64_t total = 0;
    PerClass precision{};
    PerClass recall{};
    PerClass f1{};
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double micro_precision = 0.0;
    double micro_recall = 0.0;
    double accuracy = 0.0;
};

/// Precision is 0 for an empty column, F1 is 0 when precision and recall
/// are both 0. Throws ConfigError on negative entries or an all-zero matrix.
Metrics compute_metrics(const Confusion &confusion);

/// Index of the largest logit; ties go to the lowest index.
std::size_t argmax(const nn::ClassVector &logits);

} // namespace qcnn::metrics
