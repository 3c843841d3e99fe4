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
 * @file report.hpp
 * Report bundle: curves.csv, metrics.json, confusion.csv and PNG plots.
 */

#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "qcnn/metrics.hpp"
#include "qcnn/train.hpp"

namespace qcnn::report {

inline constexpr const char *kCurvesCsv = "curves.csv";
inline constexpr const char *kMetricsJson = "metrics.json";
inline constexpr const char *kConfusionCsv = "confusion.csv";
inline constexpr const char *kCurvesPng = "curves.png";
inline constexpr const char *kConfusionPng = "confusion.png";

/// epoch,train_loss,train_acc,val_loss,val_acc
std::string curves_csv(std::span<const train::EpochStats> history);
std::string confusion_csv(const metrics::Confusion &confusion);
/// Stable key order, reals as 17-digit decimal strings.
std::string metrics_json(const metrics::Metrics &m, double loss,
                         const train::TrainConfig &cfg, std::size_t best_epoch);
/// Human-readable metric table.
std::string metrics_block(const metrics::Metrics &m);

void write_text(const std::filesystem::path &path, const std::string &text);
/// Loss and accuracy panels, train and validation series.
void plot_curves(const std::filesystem::path &path,
                 std::span<const train::EpochStats> history);
void plot_confusion(const std::filesystem::path &path,
                    const metrics::Confusion &confusion);

} // namespace qcnn::report
