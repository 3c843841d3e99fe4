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

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "qcnn/errors.hpp"
#include "qcnn/imgproc.hpp"

using namespace qcnn;
using img::GrayImage;

namespace {

GrayImage noise_image(std::size_t w, std::size_t h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    GrayImage g(w, h);
    for (auto &p : g.data) {
        p = static_cast<std::uint8_t>(rng() & 0xFF);
    }
    return g;
}

GrayImage gradient_image(std::size_t w, std::size_t h) {
    GrayImage g(w, h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            g.at(x, y) = static_cast<std::uint8_t>((x * 7 + y * 3) % 256);
        }
    }
    return g;
}

img::Image as_image(const GrayImage &g) {
    return img::Image{g.width, g.height, 1, g.data};
}

std::filesystem::path temp_dir(const std::string &name) {
    auto d = std::filesystem::temp_directory_path() / ("qcnn_imgproc_" + name);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

} // namespace

TEST(imgproc, nlm_keeps_constant_image) {
    const GrayImage g(30, 20, 117);
    EXPECT_EQ(img::nlm_denoise(g), g);
}

TEST(imgproc, nlm_suppresses_impulse) {
    GrayImage g(31, 31, 100);
    g.at(15, 15) = 255;
    const auto out = img::nlm_denoise(g);
    // The impulse keeps full self-weight; every other patch differs by
    // 155^2 / 49 in d2, weight exp(-4.9), so the centre ends near 140.
    EXPECT_LT(out.at(15, 15), 150);
    EXPECT_GT(out.at(15, 15), 100);
    EXPECT_EQ(out.at(0, 0), 100);
}

TEST(imgproc, nlm_pixel_is_weighted_mean) {
    const auto g = noise_image(40, 40, 5);
    img::NlmParams p;
    p.h = 40.0;
    const auto out = img::nlm_denoise(g, p);
    for (const auto [x, y] : {std::pair<std::size_t, std::size_t>{20, 20}, {12, 27}}) {
        const auto w = img::nlm_pixel_weights(g, x, y, p);
        ASSERT_EQ(w.size(), 21u * 21u);
        EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
        double v = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            const std::size_t sx = x + k % 21 - 10, sy = y + k / 21 - 10;
            v += w[k] * g.at(sx, sy);
        }
        EXPECT_EQ(out.at(x, y), static_cast<std::uint8_t>(std::lround(v)));
    }
}

TEST(imgproc, clipped_histogram_conserves_mass) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 20; ++t) {
        img::Histogram h{};
        std::int64_t total = 0;
        for (int i = 0; i < 30; ++i) {
            const auto c = static_cast<std::int64_t>(rng() % 400);
            h[rng() % 256] += c;
            total += c;
        }
        if (total == 0) {
            continue;
        }
        const auto out = img::clahe_clipped_histogram(h, total, 2.0 + t);
        EXPECT_EQ(std::accumulate(out.begin(), out.end(), std::int64_t{0}), total);
    }
}

TEST(imgproc, clahe_constant_image_value) {
    // 2x2 tiles of 16x16: limit 5, 251 excess spread one per bin over 0..250,
    // so cdf(100) = 101 + 5 and the LUT maps 100 to round(106 * 255 / 256).
    const GrayImage g(32, 32, 100);
    img::ClaheParams p;
    p.tiles_x = p.tiles_y = 2;
    const auto out = img::clahe(g, p);
    EXPECT_EQ(out, GrayImage(32, 32, 106));
}

TEST(imgproc, clahe_rejects_too_many_tiles) {
    const GrayImage g(4, 32, 9);
    EXPECT_THROW(img::clahe(g), ConfigError);
}

TEST(imgproc, shift_clip_saturates) {
    GrayImage g(3, 1);
    g.data = {250, 10, 100};
    const auto up = img::shift_clip(g, 30);
    EXPECT_EQ(up.data, (std::vector<std::uint8_t>{255, 40, 130}));
    const auto down = img::shift_clip(g, -30);
    EXPECT_EQ(down.data, (std::vector<std::uint8_t>{220, 0, 70}));
}

TEST(imgproc, preprocess_deterministic_and_shifted) {
    const auto g = as_image(noise_image(48, 40, 7));
    img::PreprocessStages st;
    const auto a = img::preprocess(g, {}, &st);
    const auto b = img::preprocess(g);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.width, 48u);
    EXPECT_EQ(a.height, 40u);
    EXPECT_EQ(st.final, a);
    EXPECT_GE(*std::min_element(a.data.begin(), a.data.end()), 30);
}

TEST(imgproc, augment_disabled_is_identity) {
    const auto g = gradient_image(33, 29);
    std::mt19937_64 rng(8);
    EXPECT_EQ(img::augment(g, img::AugmentConfig::disabled(), rng), g);
}

TEST(imgproc, double_flip_is_identity) {
    const auto g = gradient_image(33, 29);
    auto cfg = img::AugmentConfig::disabled();
    cfg.flip_probability = 1.0;
    std::mt19937_64 rng(9);
    const auto once = img::augment(g, cfg, rng);
    EXPECT_NE(once, g);
    EXPECT_EQ(once.at(0, 3), g.at(32, 3));
    EXPECT_EQ(img::augment(once, cfg, rng), g);
}

TEST(imgproc, augment_seeded_per_sample) {
    const auto g = gradient_image(40, 40);
    const img::AugmentConfig cfg;
    auto r1 = img::sample_stream(11, "case_001");
    auto r2 = img::sample_stream(11, "case_001");
    auto r3 = img::sample_stream(11, "case_002");
    const auto a = img::augment(g, cfg, r1);
    EXPECT_EQ(a, img::augment(g, cfg, r2));
    EXPECT_NE(a, img::augment(g, cfg, r3));
    EXPECT_EQ(a.width, 40u);
    EXPECT_EQ(a.height, 40u);
}

TEST(imgproc, augment_config_validated) {
    img::AugmentConfig c;
    c.crop_scale_min = 1.2;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.flip_probability = -0.1;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(imgproc, garbage_bytes_fail_to_decode) {
    const std::vector<std::uint8_t> junk{0x00, 0x01, 0x02, 0x03, 0x04};
    EXPECT_THROW(img::decode_image(junk), DecodeError);
    EXPECT_THROW(img::decode_image({}), DecodeError);
}

TEST(imgproc, png_round_trip) {
    const auto dir = temp_dir("png");
    const auto g = noise_image(17, 9, 10);
    img::write_png(dir / "a.png", g);
    const auto back = img::read_image(dir / "a.png");
    EXPECT_EQ(back.channels, 1u);
    EXPECT_EQ(img::to_grayscale(back), g);
    std::filesystem::remove_all(dir);
}

TEST(imgproc, rgb_png_keeps_channel_order) {
    const auto dir = temp_dir("rgb");
    img::Image rgb{1, 1, 3, {100, 150, 200}};
    img::write_png_rgb(dir / "c.png", rgb);
    const auto back = img::read_image(dir / "c.png");
    EXPECT_EQ(back.channels, 3u);
    EXPECT_EQ(back.data, rgb.data);
    // 29.9 + 88.05 + 22.8
    EXPECT_EQ(img::to_grayscale(back).data[0], 141);
    std::filesystem::remove_all(dir);
}

TEST(imgproc, comparison_sheet_layout) {
    const auto g = noise_image(20, 16, 12);
    const auto sheet = img::comparison_sheet(g);
    EXPECT_EQ(sheet.width, 4u * 20 + 3 * 4);
    EXPECT_EQ(sheet.height, 16u + 24);
    EXPECT_EQ(sheet.at(0, 24), g.at(0, 0));
}
