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

// Small separable feature sets for training tests.

#pragma once

#include <random>

#include "qcnn/data.hpp"

namespace qcnn::testing {

/// Gaussian blobs, one per class, centred at +-sep on coordinate c % dim.
inline data::FeatureSet blobs(std::uint32_t dim, std::size_t per_class,
                              double sep, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    data::FeatureSet s;
    s.dim = dim;
    for (std::size_t i = 0; i < per_class * 4; ++i) {
        const std::size_t c = i % 4;
        data::FeatureRecord r{"s" + std::to_string(i), data::Label(c), {}};
        r.values.resize(dim);
        for (std::uint32_t k = 0; k < dim; ++k) {
            r.values[k] = static_cast<float>(g(rng));
        }
        r.values[c % dim] += static_cast<float>(c < 2 ? sep : -sep);
        if (c % 2 == 1) {
            r.values[(c + 1) % dim] += static_cast<float>(sep);
        }
        s.records.push_back(std::move(r));
    }
    return s;
}

} // namespace qcnn::testing
