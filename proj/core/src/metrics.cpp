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

#include "qcnn/metrics.hpp"

#include "qcnn/errors.hpp"

namespace qcnn::metrics {

Metrics compute_metrics(const Confusion &confusion) {
    Metrics m;
    m.confusion = confusion;
    std::array<std::int64_t, kNumClasses> col{};
    std::int64_t trace = 0;
    for (std::size_t r = 0; r < kNumClasses; ++r) {
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            const std::int64_t v = confusion[r][c];
            if (v < 0) {
                throw ConfigError("confusion matrix has a negative entry");
            }
            m.support[r] += v;
            col[c] += v;
            m.total += v;
        }
        trace += confusion[r][r];
    }
    if (m.total == 0) {
        throw ConfigError("confusion matrix is all zero");
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const auto tp = static_cast<double>(confusion[c][c]);
        m.precision[c] = col[c] == 0 ? 0.0 : tp / static_cast<double>(col[c]);
        m.recall[c] =
            m.support[c] == 0 ? 0.0 : tp / static_cast<double>(m.support[c]);
        const double s = m.precision[c] + m.recall[c];
        m.f1[c] = s == 0.0 ? 0.0 : 2.0 * m.precision[c] * m.recall[c] / s;
        m.macro_precision += m.precision[c];
        m.macro_recall += m.recall[c];
        m.macro_f1 += m.f1[c];
    }
    m.macro_precision /= kNumClasses;
    m.macro_recall /= kNumClasses;
    m.macro_f1 /= kNumClasses;
    std::int64_t pooled_tp_fp = 0;
    std::int64_t pooled_tp_fn = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        pooled_tp_fp += col[c];
        pooled_tp_fn += m.support[c];
    }
    const auto t = static_cast<double>(trace);
    m.micro_precision = t / static_cast<double>(pooled_tp_fp);
    m.micro_recall = t / static_cast<double>(pooled_tp_fn);
    m.accuracy = t / static_cast<double>(m.total);
    return m;
}

std::size_t argmax(const nn::ClassVector &logits) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < logits.size(); ++c) {
        if (logits[c] > logits[best]) {
            best = c;
        }
    }
    return best;
}

} // namespace qcnn::metrics
