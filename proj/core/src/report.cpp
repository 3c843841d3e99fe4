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

#include "qcnn/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "qcnn/checkpoint.hpp"
#include "qcnn/data.hpp"

namespace qcnn::report {
namespace {

using nlohmann::ordered_json;

ordered_json per_class(const metrics::PerClass &v) {
    ordered_json o;
    for (std::size_t c = 0; c < metrics::kNumClasses; ++c) {
        o[std::string(data::label_name(static_cast<data::Label>(c)))] =
            train::format_real(v[c]);
    }
    return o;
}

void write_png(const std::filesystem::path &path, const cv::Mat &img) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    if (!cv::imwrite(path.string(), img)) {
        throw std::runtime_error("failed to write " + path.string());
    }
}

struct Series {
    std::vector<double> y;
    cv::Scalar color;
    const char *name;
};

void draw_panel(cv::Mat &canvas, cv::Rect area, const char *title,
                const std::vector<Series> &series, std::size_t n_epochs) {
    const cv::Scalar black(0, 0, 0), grey(200, 200, 200);
    const int left = area.x + 50, right = area.x + area.width - 15;
    const int top = area.y + 30, bottom = area.y + area.height - 35;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto &s : series) {
        for (const double v : s.y) {
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
        }
    }
    if (hi - lo < 1e-9) {
        hi = lo + 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    cv::putText(canvas, title, {left, area.y + 20}, cv::FONT_HERSHEY_SIMPLEX,
                0.55, black, 1, cv::LINE_AA);
    for (int k = 0; k <= 4; ++k) {
        const int y = bottom - (bottom - top) * k / 4;
        cv::line(canvas, {left, y}, {right, y}, grey, 1);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", lo + (hi - lo) * k / 4.0);
        cv::putText(canvas, buf, {area.x + 2, y + 4}, cv::FONT_HERSHEY_SIMPLEX,
                    0.35, black, 1, cv::LINE_AA);
    }
    cv::rectangle(canvas, {left, top}, {right, bottom}, black, 1);
    cv::putText(canvas, "epoch", {(left + right) / 2 - 20, bottom + 28},
                cv::FONT_HERSHEY_SIMPLEX, 0.4, black, 1, cv::LINE_AA);
    const double span = n_epochs > 1 ? static_cast<double>(n_epochs - 1) : 1.0;
    int legend_y = top + 15;
    for (const auto &s : series) {
        std::vector<cv::Point> pts;
        for (std::size_t i = 0; i < s.y.size(); ++i) {
            const double fx = static_cast<double>(i) / span;
            const double fy = (s.y[i] - lo) / (hi - lo);
            pts.emplace_back(left + static_cast<int>(fx * (right - left)),
                             bottom - static_cast<int>(fy * (bottom - top)));
        }
        if (pts.size() == 1) {
            cv::circle(canvas, pts[0], 3, s.color, cv::FILLED, cv::LINE_AA);
        } else {
            cv::polylines(canvas, pts, false, s.color, 2, cv::LINE_AA);
        }
        cv::line(canvas, {right - 110, legend_y - 4}, {right - 90, legend_y - 4},
                 s.color, 2);
        cv::putText(canvas, s.name, {right - 85, legend_y},
                    cv::FONT_HERSHEY_SIMPLEX, 0.4, black, 1, cv::LINE_AA);
        legend_y += 16;
    }
}

} // namespace

std::string curves_csv(std::span<const train::EpochStats> history) {
    std::string out = "epoch,train_loss,train_acc,val_loss,val_acc\n";
    for (const auto &h : history) {
        out += std::to_string(h.epoch) + ',' + train::format_real(h.train_loss) +
               ',' + train::format_real(h.train_acc) + ',' +
               train::format_real(h.val_loss) + ',' +
               train::format_real(h.val_acc) + '\n';
    }
    return out;
}

std::string confusion_csv(const metrics::Confusion &confusion) {
    std::string out = "true\\pred";
    for (std::size_t c = 0; c < metrics::kNumClasses; ++c) {
        out += ',';
        out += data::label_name(static_cast<data::Label>(c));
    }
    out += '\n';
    for (std::size_t r = 0; r < metrics::kNumClasses; ++r) {
        out += data::label_name(static_cast<data::Label>(r));
        for (std::size_t c = 0; c < metrics::kNumClasses; ++c) {
            out += ',' + std::to_string(confusion[r][c]);
        }
        out += '\n';
    }
    return out;
}

std::string metrics_json(const metrics::Metrics &m, double loss,
                         const train::TrainConfig &cfg, std::size_t best_epoch) {
    ordered_json j;
    j["config"] = {{"qubits", cfg.qubits},
                   {"lr", train::format_real(cfg.lr)},
                   {"batch", cfg.batch},
                   {"epochs", cfg.epochs},
                   {"nmax", cfg.n_max},
                   {"seed", cfg.seed},
                   {"freeze_head", cfg.freeze_head},
                   {"grad", std::string(train::grad_method_name(cfg.grad))}};
    j["best_epoch"] = best_epoch;
    j["samples"] = m.total;
    j["loss"] = train::format_real(loss);
    j["accuracy"] = train::format_real(m.accuracy);
    j["macro_precision"] = train::format_real(m.macro_precision);
    j["macro_recall"] = train::format_real(m.macro_recall);
    j["macro_f1"] = train::format_real(m.macro_f1);
    j["micro_precision"] = train::format_real(m.micro_precision);
    j["micro_recall"] = train::format_real(m.micro_recall);
    j["precision"] = per_class(m.precision);
    j["recall"] = per_class(m.recall);
    j["f1"] = per_class(m.f1);
    ordered_json support;
    ordered_json rows = ordered_json::array();
    for (std::size_t c = 0; c < metrics::kNumClasses; ++c) {
        support[std::string(data::label_name(static_cast<data::Label>(c)))] =
            m.support[c];
        rows.push_back(m.confusion[c]);
    }
    j["support"] = support;
    j["confusion"] = rows;
    return j.dump(2) + '\n';
}

std::string metrics_block(const metrics::Metrics &m) {
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-10s %10s %10s %10s %8s\n", "class",
                  "precision", "recall", "f1", "support");
    os << buf;
    for (std::size_t c = 0; c < metrics::kNumClasses; ++c) {
        std::snprintf(buf, sizeof buf, "%-10s %10.4f %10.4f %10.4f %8lld\n",
                      std::string(data::label_name(static_cast<data::Label>(c)))
                          .c_str(),
                      m.precision[c], m.recall[c], m.f1[c],
                      static_cast<long long>(m.support[c]));
        os << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "macro precision %.4f  macro recall %.4f  macro f1 %.4f\n"
                  "micro precision %.4f  micro recall %.4f  accuracy %.4f\n",
                  m.macro_precision, m.macro_recall, m.macro_f1,
                  m.micro_precision, m.micro_recall, m.accuracy);
    os << buf;
    return os.str();
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

void plot_curves(const std::filesystem::path &path,
                 std::span<const train::EpochStats> history) {
    if (history.empty()) {
        throw std::invalid_argument("no epochs to plot");
    }
    std::vector<double> tl, vl, ta, va;
    for (const auto &h : history) {
        tl.push_back(h.train_loss);
        vl.push_back(h.val_loss);
        ta.push_back(h.train_acc);
        va.push_back(h.val_acc);
    }
    const cv::Scalar blue(200, 90, 30), orange(30, 130, 240);
    cv::Mat canvas(360, 960, CV_8UC3, cv::Scalar(255, 255, 255));
    draw_panel(canvas, {0, 0, 480, 360}, "loss",
               {{tl, blue, "train"}, {vl, orange, "validation"}},
               history.size());
    draw_panel(canvas, {480, 0, 480, 360}, "accuracy",
               {{ta, blue, "train"}, {va, orange, "validation"}},
               history.size());
    write_png(path, canvas);
}

void plot_confusion(const std::filesystem::path &path,
                    const metrics::Confusion &confusion) {
    constexpr int kCell = 90, kLeft = 90, kTop = 60;
    const int n = static_cast<int>(metrics::kNumClasses);
    cv::Mat canvas(kTop + n * kCell + 20, kLeft + n * kCell + 20, CV_8UC3,
                   cv::Scalar(255, 255, 255));
    for (int r = 0; r < n; ++r) {
        std::int64_t row = 0;
        for (int c = 0; c < n; ++c) {
            row += confusion[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
        for (int c = 0; c < n; ++c) {
            const auto v =
                confusion[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            const double frac =
                row == 0 ? 0.0 : static_cast<double>(v) / static_cast<double>(row);
            const int shade = 255 - static_cast<int>(std::lround(frac * 200));
            const cv::Rect cell(kLeft + c * kCell, kTop + r * kCell, kCell, kCell);
            cv::rectangle(canvas, cell, cv::Scalar(255, shade, shade), cv::FILLED);
            cv::rectangle(canvas, cell, cv::Scalar(0, 0, 0), 1);
            cv::putText(canvas, std::to_string(v),
                        {cell.x + 10, cell.y + kCell / 2 + 6},
                        cv::FONT_HERSHEY_SIMPLEX, 0.6,
                        frac > 0.6 ? cv::Scalar(255, 255, 255)
                                   : cv::Scalar(0, 0, 0),
                        1, cv::LINE_AA);
        }
        const std::string name(data::label_name(static_cast<data::Label>(r)));
        cv::putText(canvas, name, {5, kTop + r * kCell + kCell / 2 + 5},
                    cv::FONT_HERSHEY_SIMPLEX, 0.5, cv::Scalar(0, 0, 0), 1,
                    cv::LINE_AA);
        cv::putText(canvas, name, {kLeft + r * kCell + 10, kTop - 10},
                    cv::FONT_HERSHEY_SIMPLEX, 0.5, cv::Scalar(0, 0, 0), 1,
                    cv::LINE_AA);
    }
    cv::putText(canvas, "true \\ predicted", {5, 20}, cv::FONT_HERSHEY_SIMPLEX,
                0.5, cv::Scalar(0, 0, 0), 1, cv::LINE_AA);
    write_png(path, canvas);
}

} // namespace qcnn::report
