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
 * @file imgproc.hpp
 * Grayscale preprocessing (non-local-means denoise, CLAHE, brightness
 * shift) and training-time geometric augmentation.
 */
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace qcnn::img {

/// Row-major 8-bit single-channel image.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> data;

    GrayImage() = default;
    GrayImage(std::size_t w, std::size_t h, std::uint8_t fill = 0)
        : width(w), height(h), data(w * h, fill) {}

    std::uint8_t &at(std::size_t x, std::size_t y) { return data[y * width + x]; }
    [[nodiscard]] std::uint8_t at(std::size_t x, std::size_t y) const {
        return data[y * width + x];
    }
    [[nodiscard]] bool valid() const {
        return width > 0 && height > 0 && data.size() == width * height;
    }
    bool operator==(const GrayImage &) const = default;
};

/// Interleaved 8-bit image, 1 (gray) or 3 (R, G, B) channels.
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 1;
    std::vector<std::uint8_t> data;
};

/// Decodes PNG/JPEG bytes. Throws DecodeError.
Image decode_image(const std::vector<std::uint8_t> &bytes);
Image read_image(const std::filesystem::path &path);
void write_png(const std::filesystem::path &path, const GrayImage &img);
void write_png_rgb(const std::filesystem::path &path, const Image &img);

/// 0.299 R + 0.587 G + 0.114 B rounded to nearest; gray input passes through.
GrayImage to_grayscale(const Image &img);

struct NlmParams {
    double h = 10.0;
    std::size_t template_size = 7;
    std::size_t search_size = 21;
};

/// Non-local means: w = exp(-d2 / h^2), d2 the mean squared difference over
/// the template patch, borders mirrored.
GrayImage nlm_denoise(const GrayImage &img, const NlmParams &p = {});

/// Normalized weights used for pixel (x, y), row-major over the search
/// window. Exposed for tests.
std::vector<double> nlm_pixel_weights(const GrayImage &img, std::size_t x,
                                      std::size_t y, const NlmParams &p = {});

struct ClaheParams {
    double clip_limit = 5.0;
    std::size_t tiles_x = 8;
    std::size_t tiles_y = 8;
};

using Histogram = std::array<std::int64_t, 256>;

/// Histogram of one tile with counts above the clip limit clipped and the
/// excess redistributed; the total equals the tile pixel count.
Histogram clahe_clipped_histogram(const Histogram &hist,
                                  std::int64_t tile_pixels, double clip_limit);

GrayImage clahe(const GrayImage &img, const ClaheParams &p = {});

/// Saturating per-pixel add.
GrayImage shift_clip(const GrayImage &img, int delta);

struct PreprocessParams {
    NlmParams nlm;
    ClaheParams clahe;
    int shift = 30;
};

/// Intermediate results of preprocess(), for comparison sheets.
struct PreprocessStages {
    GrayImage gray;
    GrayImage denoised;
    GrayImage final;
};

/// grayscale -> NLM -> CLAHE -> +shift.
GrayImage preprocess(const Image &img, const PreprocessParams &p = {},
                     PreprocessStages *stages = nullptr);

/// Four panels side by side: original, CLAHE only, denoise only, both.
GrayImage comparison_sheet(const GrayImage &gray, const PreprocessParams &p = {});

struct AugmentConfig {
    double rotation_degrees = 15.0;
    double flip_probability = 0.5;
    double crop_scale_min = 0.7;
    double crop_scale_max = 1.0;
    double zoom_out_max = 1.5;
    std::uint64_t seed = 0;

    /// Every transform off.
    static AugmentConfig disabled();
    void validate() const;
};

/// Zoom-out, resized crop, rotation, horizontal flip, in that order. Output
/// has the input's dimensions.
GrayImage augment(const GrayImage &img, const AugmentConfig &cfg,
                  std::mt19937_64 &rng);

/// Stream for one sample, independent of processing order.
std::mt19937_64 sample_stream(std::uint64_t seed, const std::string &sample_id);

} // namespace qcnn::img
