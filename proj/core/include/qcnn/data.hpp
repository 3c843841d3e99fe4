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
 * @file data.hpp
 * Manifests, stratified splits, class weights, the weighted sampler and the
 * binary feature-file codec.
 */

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcnn::data {

inline constexpr std::size_t kNumClasses = 4;

enum class Label : std::uint8_t { Normal = 0, Cyst = 1, Stone = 2, Tumor = 3 };

std::string_view label_name(Label label);
/// Case-sensitive. Throws ConfigError on anything else.
Label parse_label(std::string_view name);
/// Throws FormatError for codes above 3.
Label label_from_code(std::uint8_t code);
inline std::size_t index_of(Label label) {
    return static_cast<std::size_t>(label);
}

using ClassCounts = std::array<std::size_t, kNumClasses>;
using ClassWeights = std::array<double, kNumClasses>;

struct ManifestRecord {
    std::string id;
    std::string path;
    Label label = Label::Normal;

    bool operator==(const ManifestRecord &) const = default;
};

struct Manifest {
    std::vector<ManifestRecord> records;

    /// Throws ConfigError on duplicate or empty ids.
    void validate() const;
    [[nodiscard]] std::vector<Label> labels() const;
    [[nodiscard]] std::size_t size() const { return records.size(); }
};

/// CSV with header `id,path,label`. Fields may be double-quoted.
Manifest parse_manifest(std::string_view text);
Manifest read_manifest(const std::filesystem::path &path);
void write_manifest(const std::filesystem::path &path, const Manifest &m);

struct SplitRatios {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
};

struct Split {
    Manifest train;
    Manifest val;
    Manifest test;
};

/// Per-class sizes: floor(r_train n), floor(r_val n), remainder.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios &r);

/// Stratified split. Records are sorted by id before the per-class shuffle,
/// so the result does not depend on manifest order.
Split split(const Manifest &manifest, const SplitRatios &ratios,
            std::uint64_t seed);

ClassCounts class_counts(std::span<const Label> labels);

/// (N/4)/n_c. Throws ConfigError if a class is missing.
ClassWeights class_weights(std::span<const Label> labels);

struct SamplerPlan {
    ClassWeights weights{}; // per-sample weight for each class
    std::size_t draws = 0;
    std::uint64_t seed = 0;

    /// Weights 1/n_c and n_max * 4 draws.
    static SamplerPlan inverse_frequency(std::span<const Label> labels,
                                         std::size_t n_max,
                                         std::uint64_t seed);
};

/// I.i.d. draws with replacement; P(i) proportional to
/// plan.weights[label(i)].
std::vector<std::size_t> weighted_sample(const SamplerPlan &plan,
                                         std::span<const Label> labels);

struct FeatureRecord {
    std::string id;
    Label label = Label::Normal;
    std::vector<float> values;

    bool operator==(const FeatureRecord &) const = default;
};

struct FeatureSet {
    std::uint32_t dim = 0;
    std::vector<FeatureRecord> records;

    [[nodiscard]] std::size_t size() const { return records.size(); }
    [[nodiscard]] std::vector<Label> labels() const;
    /// Throws ConfigError on a dimension mismatch or non-finite value.
    void validate() const;
    bool operator==(const FeatureSet &) const = default;
};

inline constexpr std::array<char, 4> kFeatureMagic{'Q', 'C', 'N', 'F'};
inline constexpr std::uint16_t kFeatureVersion = 1;
inline constexpr std::size_t kFeatureHeaderBytes = 14;

std::vector<std::uint8_t> encode_features(const FeatureSet &set);
/// Throws FormatError carrying the byte offset of the first problem.
FeatureSet decode_features(std::span<const std::uint8_t> bytes);

void write_features(const std::filesystem::path &path, const FeatureSet &set);
FeatureSet read_features(const std::filesystem::path &path);

} // namespace qcnn::data
