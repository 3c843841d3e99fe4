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
 * @file checkpoint.hpp
 * JSON checkpoints. Reals are stored as 17-significant-digit strings so a
 * reload is bit-exact.
 */

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qcnn/data.hpp"
#include "qcnn/train.hpp"

namespace qcnn::train {

struct Checkpoint {
    TrainConfig config;
    std::size_t feature_dim = 0;
    data::ClassWeights class_weights{};
    TrainState state;
};

std::string checkpoint_to_json(const Checkpoint &ckpt);
/// Throws CheckpointError naming the JSON pointer of the first bad field.
Checkpoint checkpoint_from_json(std::string_view text);

/// Written to a temporary file, then renamed into place.
void save_checkpoint(const std::filesystem::path &path, const Checkpoint &ckpt);
Checkpoint load_checkpoint(const std::filesystem::path &path);

/// "%.17g"; round-trips every finite double.
std::string format_real(double v);
/// Throws ConfigError unless the whole string parses to a finite double.
double parse_real(std::string_view s);

} // namespace qcnn::train
