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

#include "qcnn/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "qcnn/errors.hpp"

namespace qcnn::img {
namespace {

/// Reflect-101 index into [0, n).
std::ptrdiff_t mirror(std::ptrdiff_t i, std::ptrdiff_t n) {
    if (n == 1) {
        return 0;
    }
    const std::ptrdiff_t period = 2 * (n - 1);
    i = std::abs(i) % period;
    return i >= n ? period - i : i;
}

struct Padded {
    std::ptrdiff_t pad = 0;
    std::ptrdiff_t width = 0;
    std::ptrdiff_t height = 0;
    std::vector<int> data;

    [[nodiscard]] int at(std::ptrdiff_t x, std::ptrdiff_t y) const {
        return data[static_cast<std::size_t>(y * width + x)];
    }
};

Padded pad_mirror(const GrayImage &img, std::ptrdiff_t pad) {
    Padded p;
    p.pad = pad;
    p.width = static_cast<std::ptrdiff_t>(img.width) + 2 * pad;
    p.height = static_cast<std::ptrdiff_t>(img.height) + 2 * pad;
    p.data.resize(static_cast<std::size_t>(p.width * p.height));
    const auto w = static_cast<std::ptrdiff_t>(img.width);
    const auto h = static_cast<std::ptrdiff_t>(img.height);
    for (std::ptrdiff_t y = 0; y < p.height; ++y) {
        const auto sy = static_cast<std::size_t>(mirror(y - pad, h));
        for (std::ptrdiff_t x = 0; x < p.width; ++x) {
            const auto sx = static_cast<std::size_t>(mirror(x - pad, w));
            p.data[static_cast<std::size_t>(y * p.width + x)] = img.at(sx, sy);
        }
    }
    return p;
}

void check_image(const GrayImage &img) {
    if (!img.valid()) {
        throw ConfigError("image is empty or its buffer size is inconsistent");
    }
}

void check_nlm(const NlmParams &p) {
    if (p.template_size % 2 == 0 || p.search_size % 2 == 0 ||
        p.template_size == 0 || p.search_size == 0) {
        throw ConfigError("NLM window sizes must be odd and positive");
    }
    if (!(p.h > 0.0)) {
        throw ConfigError("NLM strength must be positive");
    }
}

std::uint8_t clamp_round(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

/// Bilinear sample at continuous (fx, fy); outside pixels read as `fill`
/// unless `replicate` clamps to the border.
double sample_bilinear(const GrayImage &img, double fx, double fy,
                       bool replicate, double fill = 0.0) {
    const auto w = static_cast<std::ptrdiff_t>(img.width);
    const auto h = static_cast<std::ptrdiff_t>(img.height);
    if (replicate) {
        fx = std::clamp(fx, 0.0, static_cast<double>(w - 1));
        fy = std::clamp(fy, 0.0, static_cast<double>(h - 1));
    }
    const auto x0 = static_cast<std::ptrdiff_t>(std::floor(fx));
    const auto y0 = static_cast<std::ptrdiff_t>(std::floor(fy));
    const double ax = fx - static_cast<double>(x0);
    const double ay = fy - static_cast<double>(y0);
    auto px = [&](std::ptrdiff_t x, std::ptrdiff_t y) -> double {
        if (x < 0 || y < 0 || x >= w || y >= h) {
            if (replicate) {
                x = std::clamp<std::ptrdiff_t>(x, 0, w - 1);
                y = std::clamp<std::ptrdiff_t>(y, 0, h - 1);
            } else {
                return fill;
            }
        }
        return img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    };
    return (1 - ay) * ((1 - ax) * px(x0, y0) + ax * px(x0 + 1, y0)) +
           ay * ((1 - ax) * px(x0, y0 + 1) + ax * px(x0 + 1, y0 + 1));
}

GrayImage resize_bilinear(const GrayImage &src, std::size_t x0, std::size_t y0,
                          std::size_t cw, std::size_t ch, std::size_t dw,
                          std::size_t dh) {
    GrayImage out(dw, dh);
    const double sx = static_cast<double>(cw) / static_cast<double>(dw);
    const double sy = static_cast<double>(ch) / static_cast<double>(dh);
    GrayImage crop(cw, ch);
    for (std::size_t y = 0; y < ch; ++y) {
        for (std::size_t x = 0; x < cw; ++x) {
            crop.at(x, y) = src.at(x0 + x, y0 + y);
        }
    }
    for (std::size_t y = 0; y < dh; ++y) {
        for (std::size_t x = 0; x < dw; ++x) {
            const double fx = (static_cast<double>(x) + 0.5) * sx - 0.5;
            const double fy = (static_cast<double>(y) + 0.5) * sy - 0.5;
            out.at(x, y) = clamp_round(sample_bilinear(crop, fx, fy, true));
        }
    }
    return out;
}

std::size_t uniform_index(std::mt19937_64 &rng, std::size_t hi_inclusive) {
    std::uniform_int_distribution<std::size_t> d(0, hi_inclusive);
    return d(rng);
}

cv::Mat to_mat(const GrayImage &img) {
    cv::Mat m(static_cast<int>(img.height), static_cast<int>(img.width),
              CV_8UC1);
    std::copy(img.data.begin(), img.data.end(), m.data);
    return m;
}

} // namespace

Image decode_image(const std::vector<std::uint8_t> &bytes) {
    if (bytes.empty()) {
        throw DecodeError("empty image buffer");
    }
    cv::Mat m = cv::imdecode(bytes, cv::IMREAD_UNCHANGED);
    if (m.empty()) {
        throw DecodeError("could not decode image buffer");
    }
    if (m.depth() != CV_8U) {
        cv::Mat tmp;
        m.convertTo(tmp, CV_8U, m.depth() == CV_16U ? 1.0 / 257.0 : 1.0);
        m = tmp;
    }
    Image out;
    out.width = static_cast<std::size_t>(m.cols);
    out.height = static_cast<std::size_t>(m.rows);
    cv::Mat conv;
    switch (m.channels()) {
    case 1:
        conv = m;
        out.channels = 1;
        break;
    case 3:
        cv::cvtColor(m, conv, cv::COLOR_BGR2RGB);
        out.channels = 3;
        break;
    case 4:
        cv::cvtColor(m, conv, cv::COLOR_BGRA2RGB);
        out.channels = 3;
        break;
    default:
        throw DecodeError("unsupported channel count " +
                          std::to_string(m.channels()));
    }
    conv = conv.isContinuous() ? conv : conv.clone();
    out.data.assign(conv.data, conv.data + conv.total() * conv.elemSize());
    return out;
}

Image read_image(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DecodeError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    try {
        return decode_image(bytes);
    } catch (const DecodeError &e) {
        throw DecodeError(path.string() + ": " + e.what());
    }
}

void write_png(const std::filesystem::path &path, const GrayImage &img) {
    check_image(img);
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    if (!cv::imwrite(path.string(), to_mat(img))) {
        throw std::runtime_error("failed to write " + path.string());
    }
}

void write_png_rgb(const std::filesystem::path &path, const Image &img) {
    if (img.channels != 3 || img.data.size() != img.width * img.height * 3) {
        throw ConfigError("write_png_rgb expects a 3-channel image");
    }
    cv::Mat rgb(static_cast<int>(img.height), static_cast<int>(img.width),
                CV_8UC3);
    std::copy(img.data.begin(), img.data.end(), rgb.data);
    cv::Mat bgr;
    cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    if (!cv::imwrite(path.string(), bgr)) {
        throw std::runtime_error("failed to write " + path.string());
    }
}

GrayImage to_grayscale(const Image &img) {
    if (img.width == 0 || img.height == 0 ||
        img.data.size() != img.width * img.height * img.channels) {
        throw DecodeError("corrupt or empty image buffer");
    }
    GrayImage out(img.width, img.height);
    if (img.channels == 1) {
        out.data = img.data;
        return out;
    }
    if (img.channels != 3) {
        throw DecodeError("expected 1 or 3 channels");
    }
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        const double r = img.data[3 * i];
        const double g = img.data[3 * i + 1];
        const double b = img.data[3 * i + 2];
        out.data[i] = clamp_round(0.299 * r + 0.587 * g + 0.114 * b);
    }
    return out;
}

GrayImage nlm_denoise(const GrayImage &img, const NlmParams &p) {
    check_image(img);
    check_nlm(p);
    const auto rt = static_cast<std::ptrdiff_t>(p.template_size / 2);
    const auto rs = static_cast<std::ptrdiff_t>(p.search_size / 2);
    const Padded pad = pad_mirror(img, rt + rs);
    const auto w = static_cast<std::ptrdiff_t>(img.width);
    const auto h = static_cast<std::ptrdiff_t>(img.height);
    const double patch = static_cast<double>(p.template_size * p.template_size);
    const double inv_h2 = 1.0 / (p.h * p.h);

    // Region of padded coordinates whose template sums we need.
    const std::ptrdiff_t rx0 = rs, ry0 = rs;
    const std::ptrdiff_t rw = w + 2 * rt, rh = h + 2 * rt;
    std::vector<std::int64_t> integral(
        static_cast<std::size_t>((rw + 1) * (rh + 1)));
    std::vector<double> sum_w(static_cast<std::size_t>(w * h), 0.0);
    std::vector<double> sum_v(static_cast<std::size_t>(w * h), 0.0);

    for (std::ptrdiff_t dy = -rs; dy <= rs; ++dy) {
        for (std::ptrdiff_t dx = -rs; dx <= rs; ++dx) {
            // Integral image of squared differences between the region and
            // its (dx, dy)-shifted copy.
            for (std::ptrdiff_t y = 0; y < rh; ++y) {
                std::int64_t row = 0;
                for (std::ptrdiff_t x = 0; x < rw; ++x) {
                    const int a = pad.at(rx0 + x, ry0 + y);
                    const int b = pad.at(rx0 + x + dx, ry0 + y + dy);
                    row += static_cast<std::int64_t>(a - b) * (a - b);
                    integral[static_cast<std::size_t>((y + 1) * (rw + 1) + x +
                                                      1)] =
                        integral[static_cast<std::size_t>(y * (rw + 1) + x +
                                                          1)] +
                        row;
                }
            }
            const std::ptrdiff_t t = 2 * rt + 1;
            for (std::ptrdiff_t y = 0; y < h; ++y) {
                for (std::ptrdiff_t x = 0; x < w; ++x) {
                    auto I = [&](std::ptrdiff_t xx, std::ptrdiff_t yy) {
                        return integral[static_cast<std::size_t>(
                            yy * (rw + 1) + xx)];
                    };
                    const std::int64_t ssd =
                        I(x + t, y + t) - I(x, y + t) - I(x + t, y) + I(x, y);
                    const double d2 = static_cast<double>(ssd) / patch;
                    const double wgt = std::exp(-d2 * inv_h2);
                    const auto k = static_cast<std::size_t>(y * w + x);
                    sum_w[k] += wgt;
                    sum_v[k] += wgt * pad.at(pad.pad + x + dx, pad.pad + y + dy);
                }
            }
        }
    }
    GrayImage out(img.width, img.height);
    for (std::size_t k = 0; k < out.data.size(); ++k) {
        out.data[k] = clamp_round(sum_v[k] / sum_w[k]);
    }
    return out;
}

std::vector<double> nlm_pixel_weights(const GrayImage &img, std::size_t x,
                                      std::size_t y, const NlmParams &p) {
    check_image(img);
    check_nlm(p);
    if (x >= img.width || y >= img.height) {
        throw std::out_of_range("pixel outside image");
    }
    const auto rt = static_cast<std::ptrdiff_t>(p.template_size / 2);
    const auto rs = static_cast<std::ptrdiff_t>(p.search_size / 2);
    const Padded pad = pad_mirror(img, rt + rs);
    const auto cx = static_cast<std::ptrdiff_t>(x) + pad.pad;
    const auto cy = static_cast<std::ptrdiff_t>(y) + pad.pad;
    const double patch = static_cast<double>(p.template_size * p.template_size);
    std::vector<double> w;
    double total = 0.0;
    for (std::ptrdiff_t dy = -rs; dy <= rs; ++dy) {
        for (std::ptrdiff_t dx = -rs; dx <= rs; ++dx) {
            std::int64_t ssd = 0;
            for (std::ptrdiff_t j = -rt; j <= rt; ++j) {
                for (std::ptrdiff_t i = -rt; i <= rt; ++i) {
                    const int d = pad.at(cx + i, cy + j) -
                                  pad.at(cx + dx + i, cy + dy + j);
                    ssd += static_cast<std::int64_t>(d) * d;
                }
            }
            const double v =
                std::exp(-(static_cast<double>(ssd) / patch) / (p.h * p.h));
            w.push_back(v);
            total += v;
        }
    }
    for (auto &v : w) {
        v /= total;
    }
    return w;
}

Histogram clahe_clipped_histogram(const Histogram &hist,
                                  std::int64_t tile_pixels, double clip_limit) {
    Histogram out = hist;
    if (clip_limit <= 0.0) {
        return out;
    }
    const std::int64_t limit = std::max<std::int64_t>(
        static_cast<std::int64_t>(clip_limit * static_cast<double>(tile_pixels) /
                                  256.0),
        1);
    std::int64_t excess = 0;
    for (auto &c : out) {
        if (c > limit) {
            excess += c - limit;
            c = limit;
        }
    }
    const std::int64_t batch = excess / 256;
    std::int64_t residual = excess - batch * 256;
    for (auto &c : out) {
        c += batch;
    }
    if (residual > 0) {
        const std::int64_t step = std::max<std::int64_t>(256 / residual, 1);
        for (std::int64_t i = 0; i < 256 && residual > 0; i += step, --residual) {
            ++out[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

GrayImage clahe(const GrayImage &img, const ClaheParams &p) {
    check_image(img);
    if (p.tiles_x == 0 || p.tiles_y == 0 || img.width < p.tiles_x ||
        img.height < p.tiles_y) {
        throw ConfigError("CLAHE tile grid leaves a tile with zero pixels");
    }
    const std::size_t tx = p.tiles_x, ty = p.tiles_y;
    std::vector<std::array<std::uint8_t, 256>> luts(tx * ty);
    for (std::size_t j = 0; j < ty; ++j) {
        const std::size_t y0 = j * img.height / ty;
        const std::size_t y1 = (j + 1) * img.height / ty;
        for (std::size_t i = 0; i < tx; ++i) {
            const std::size_t x0 = i * img.width / tx;
            const std::size_t x1 = (i + 1) * img.width / tx;
            Histogram hist{};
            for (std::size_t y = y0; y < y1; ++y) {
                for (std::size_t x = x0; x < x1; ++x) {
                    ++hist[img.at(x, y)];
                }
            }
            const auto n = static_cast<std::int64_t>((x1 - x0) * (y1 - y0));
            const Histogram clipped =
                clahe_clipped_histogram(hist, n, p.clip_limit);
            const double scale = 255.0 / static_cast<double>(n);
            std::int64_t cdf = 0;
            auto &lut = luts[j * tx + i];
            for (std::size_t b = 0; b < 256; ++b) {
                cdf += clipped[b];
                lut[b] = clamp_round(static_cast<double>(cdf) * scale);
            }
        }
    }
    const double tile_w = static_cast<double>(img.width) / static_cast<double>(tx);
    const double tile_h = static_cast<double>(img.height) / static_cast<double>(ty);
    GrayImage out(img.width, img.height);
    for (std::size_t y = 0; y < img.height; ++y) {
        const double fy = (static_cast<double>(y) + 0.5) / tile_h - 0.5;
        const auto ty1 = static_cast<std::ptrdiff_t>(std::floor(fy));
        const double ay = fy - static_cast<double>(ty1);
        const auto r0 = static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(ty1, 0, static_cast<std::ptrdiff_t>(ty) - 1));
        const auto r1 = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
            ty1 + 1, 0, static_cast<std::ptrdiff_t>(ty) - 1));
        for (std::size_t x = 0; x < img.width; ++x) {
            const double fx = (static_cast<double>(x) + 0.5) / tile_w - 0.5;
            const auto tx1 = static_cast<std::ptrdiff_t>(std::floor(fx));
            const double ax = fx - static_cast<double>(tx1);
            const auto c0 = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
                tx1, 0, static_cast<std::ptrdiff_t>(tx) - 1));
            const auto c1 = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
                tx1 + 1, 0, static_cast<std::ptrdiff_t>(tx) - 1));
            const std::uint8_t v = img.at(x, y);
            const double top = (1 - ax) * luts[r0 * tx + c0][v] +
                               ax * luts[r0 * tx + c1][v];
            const double bot = (1 - ax) * luts[r1 * tx + c0][v] +
                               ax * luts[r1 * tx + c1][v];
            out.at(x, y) = clamp_round((1 - ay) * top + ay * bot);
        }
    }
    return out;
}

GrayImage shift_clip(const GrayImage &img, int delta) {
    GrayImage out = img;
    for (auto &v : out.data) {
        v = static_cast<std::uint8_t>(std::clamp(int{v} + delta, 0, 255));
    }
    return out;
}

GrayImage preprocess(const Image &img, const PreprocessParams &p,
                     PreprocessStages *stages) {
    GrayImage gray = to_grayscale(img);
    GrayImage den = nlm_denoise(gray, p.nlm);
    GrayImage fin = shift_clip(clahe(den, p.clahe), p.shift);
    if (stages) {
        stages->gray = std::move(gray);
        stages->denoised = std::move(den);
        stages->final = fin;
    }
    return fin;
}

GrayImage comparison_sheet(const GrayImage &gray, const PreprocessParams &p) {
    check_image(gray);
    const GrayImage den = nlm_denoise(gray, p.nlm);
    const std::array<GrayImage, 4> panels{
        gray, shift_clip(clahe(gray, p.clahe), p.shift), den,
        shift_clip(clahe(den, p.clahe), p.shift)};
    const std::array<const char *, 4> titles{"original", "CLAHE", "denoise",
                                             "denoise+CLAHE"};
    constexpr int kGap = 4;
    constexpr int kHeader = 24;
    const int w = static_cast<int>(gray.width);
    const int h = static_cast<int>(gray.height);
    cv::Mat sheet(h + kHeader, 4 * w + 3 * kGap, CV_8UC1, cv::Scalar(0));
    for (int k = 0; k < 4; ++k) {
        const int x0 = k * (w + kGap);
        to_mat(panels[static_cast<std::size_t>(k)])
            .copyTo(sheet(cv::Rect(x0, kHeader, w, h)));
        cv::putText(sheet, titles[static_cast<std::size_t>(k)],
                    cv::Point(x0 + 2, kHeader - 7), cv::FONT_HERSHEY_SIMPLEX,
                    0.45, cv::Scalar(255), 1, cv::LINE_AA);
    }
    GrayImage out(static_cast<std::size_t>(sheet.cols),
                  static_cast<std::size_t>(sheet.rows));
    std::copy(sheet.data, sheet.data + sheet.total(), out.data.begin());
    return out;
}

AugmentConfig AugmentConfig::disabled() {
    AugmentConfig c;
    c.rotation_degrees = 0.0;
    c.flip_probability = 0.0;
    c.crop_scale_min = 1.0;
    c.crop_scale_max = 1.0;
    c.zoom_out_max = 1.0;
    return c;
}

void AugmentConfig::validate() const {
    if (!(flip_probability >= 0.0 && flip_probability <= 1.0)) {
        throw ConfigError("flip probability must lie in [0, 1]");
    }
    if (!(crop_scale_min > 0.0 && crop_scale_min <= crop_scale_max &&
          crop_scale_max <= 1.0)) {
        throw ConfigError("crop scale range must satisfy 0 < min <= max <= 1");
    }
    if (!(zoom_out_max >= 1.0)) {
        throw ConfigError("zoom-out factor must be >= 1");
    }
    if (!(rotation_degrees >= 0.0 && rotation_degrees <= 180.0)) {
        throw ConfigError("rotation range must lie in [0, 180] degrees");
    }
}

GrayImage augment(const GrayImage &img, const AugmentConfig &cfg,
                  std::mt19937_64 &rng) {
    check_image(img);
    cfg.validate();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    GrayImage cur = img;
    bool resized = false;

    if (cfg.zoom_out_max > 1.0) {
        const double f = 1.0 + (cfg.zoom_out_max - 1.0) * unit(rng);
        const auto cw = static_cast<std::size_t>(
            std::lround(static_cast<double>(img.width) * f));
        const auto ch = static_cast<std::size_t>(
            std::lround(static_cast<double>(img.height) * f));
        const std::size_t ox = uniform_index(rng, cw - img.width);
        const std::size_t oy = uniform_index(rng, ch - img.height);
        GrayImage canvas(cw, ch, 0);
        for (std::size_t y = 0; y < img.height; ++y) {
            for (std::size_t x = 0; x < img.width; ++x) {
                canvas.at(ox + x, oy + y) = img.at(x, y);
            }
        }
        cur = std::move(canvas);
        resized = true;
    }

    bool cropped = false;
    if (cfg.crop_scale_min < 1.0 || cfg.crop_scale_max < 1.0) {
        for (int attempt = 0; attempt < 10 && !cropped; ++attempt) {
            const double s = cfg.crop_scale_min +
                             (cfg.crop_scale_max - cfg.crop_scale_min) * unit(rng);
            const auto cw = static_cast<std::size_t>(
                std::lround(static_cast<double>(cur.width) * std::sqrt(s)));
            const auto ch = static_cast<std::size_t>(
                std::lround(static_cast<double>(cur.height) * std::sqrt(s)));
            if (cw < 1 || ch < 1 || cw > cur.width || ch > cur.height) {
                continue;
            }
            const std::size_t ox = uniform_index(rng, cur.width - cw);
            const std::size_t oy = uniform_index(rng, cur.height - ch);
            cur = resize_bilinear(cur, ox, oy, cw, ch, img.width, img.height);
            cropped = true;
        }
    }
    if (resized && !cropped) {
        cur = resize_bilinear(cur, 0, 0, cur.width, cur.height, img.width,
                              img.height);
    }

    if (cfg.rotation_degrees > 0.0) {
        const double deg = cfg.rotation_degrees * (2.0 * unit(rng) - 1.0);
        const double rad = deg * std::numbers::pi / 180.0;
        const double c = std::cos(rad), s = std::sin(rad);
        const double cx = (static_cast<double>(cur.width) - 1.0) / 2.0;
        const double cy = (static_cast<double>(cur.height) - 1.0) / 2.0;
        GrayImage rot(cur.width, cur.height);
        for (std::size_t y = 0; y < cur.height; ++y) {
            for (std::size_t x = 0; x < cur.width; ++x) {
                const double dx = static_cast<double>(x) - cx;
                const double dy = static_cast<double>(y) - cy;
                // Inverse map: source = R(-angle) * destination.
                const double sx = c * dx + s * dy + cx;
                const double sy = -s * dx + c * dy + cy;
                rot.at(x, y) = clamp_round(sample_bilinear(cur, sx, sy, false));
            }
        }
        cur = std::move(rot);
    }

    if (cfg.flip_probability > 0.0 && unit(rng) < cfg.flip_probability) {
        for (std::size_t y = 0; y < cur.height; ++y) {
            auto row = cur.data.begin() + static_cast<std::ptrdiff_t>(y * cur.width);
            std::reverse(row, row + static_cast<std::ptrdiff_t>(cur.width));
        }
    }
    return cur;
}

std::mt19937_64 sample_stream(std::uint64_t seed, const std::string &sample_id) {
    // FNV-1a keeps the stream independent of std::hash.
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : sample_id) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h),
                      static_cast<std::uint32_t>(h >> 32)};
    return std::mt19937_64(seq);
}

} // namespace qcnn::img
