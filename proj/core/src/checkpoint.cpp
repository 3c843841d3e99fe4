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

#include "qcnn/checkpoint.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qcnn/errors.hpp"

namespace qcnn::train {
namespace {

using nlohmann::json;

constexpr const char *kFormat = "qcnn-checkpoint";
constexpr int kVersion = 1;

json reals(std::span<const double> v) {
    json a = json::array();
    for (const double x : v) {
        a.push_back(format_real(x));
    }
    return a;
}

json adam_json(const nn::AdamState &s) {
    return {{"step", s.step}, {"m", reals(s.m)}, {"v", reals(s.v)}};
}

/// Typed access that reports failures as JSON pointers.
class Reader {
  public:
    static const json &field(const json &obj, const std::string &ptr,
                             const std::string &key) {
        if (!obj.is_object()) {
            throw CheckpointError(ptr, "expected an object");
        }
        const auto it = obj.find(key);
        if (it == obj.end()) {
            throw CheckpointError(ptr + "/" + key, "missing field");
        }
        return *it;
    }

    static double real(const json &v, const std::string &ptr) {
        if (!v.is_string()) {
            throw CheckpointError(ptr, "expected a decimal string");
        }
        try {
            return parse_real(v.get<std::string>());
        } catch (const ConfigError &e) {
            throw CheckpointError(ptr, e.what());
        }
    }

    static std::uint64_t uint(const json &v, const std::string &ptr) {
        if (!v.is_number_unsigned()) {
            throw CheckpointError(ptr, "expected a nonnegative integer");
        }
        return v.get<std::uint64_t>();
    }

    static bool boolean(const json &v, const std::string &ptr) {
        if (!v.is_boolean()) {
            throw CheckpointError(ptr, "expected true or false");
        }
        return v.get<bool>();
    }

    static std::string string(const json &v, const std::string &ptr) {
        if (!v.is_string()) {
            throw CheckpointError(ptr, "expected a string");
        }
        return v.get<std::string>();
    }

    static void reals_into(const json &v, const std::string &ptr,
                           std::span<double> out) {
        if (!v.is_array()) {
            throw CheckpointError(ptr, "expected an array");
        }
        if (v.size() != out.size()) {
            throw CheckpointError(ptr, "expected " + std::to_string(out.size()) +
                                           " values, found " +
                                           std::to_string(v.size()));
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = real(v[i], ptr + "/" + std::to_string(i));
        }
    }

    static double real_at(const json &obj, const std::string &ptr,
                          const std::string &key) {
        return real(field(obj, ptr, key), ptr + "/" + key);
    }
    static std::uint64_t uint_at(const json &obj, const std::string &ptr,
                                 const std::string &key) {
        return uint(field(obj, ptr, key), ptr + "/" + key);
    }
};

void read_adam(const json &obj, const std::string &ptr, nn::AdamState &s) {
    s.step = Reader::uint_at(obj, ptr, "step");
    Reader::reals_into(Reader::field(obj, ptr, "m"), ptr + "/m", s.m);
    Reader::reals_into(Reader::field(obj, ptr, "v"), ptr + "/v", s.v);
}

TrainConfig read_config(const json &c) {
    const std::string p = "/config";
    TrainConfig cfg;
    cfg.qubits = Reader::uint_at(c, p, "qubits");
    if (cfg.qubits != 8 && cfg.qubits != 12) {
        throw CheckpointError(p + "/qubits", "must be 8 or 12");
    }
    cfg.lr = Reader::real_at(c, p, "lr");
    cfg.batch = Reader::uint_at(c, p, "batch");
    cfg.epochs = Reader::uint_at(c, p, "epochs");
    cfg.n_max = Reader::uint_at(c, p, "nmax");
    cfg.seed = Reader::uint_at(c, p, "seed");
    cfg.freeze_head =
        Reader::boolean(Reader::field(c, p, "freeze_head"), p + "/freeze_head");
    try {
        cfg.grad = parse_grad_method(
            Reader::string(Reader::field(c, p, "grad"), p + "/grad"));
    } catch (const ConfigError &e) {
        throw CheckpointError(p + "/grad", e.what());
    }
    const json &a = Reader::field(c, p, "augment");
    const std::string pa = p + "/augment";
    cfg.augment.rotation_degrees = Reader::real_at(a, pa, "rotation");
    cfg.augment.flip_probability = Reader::real_at(a, pa, "flip");
    cfg.augment.crop_scale_min = Reader::real_at(a, pa, "crop_min");
    cfg.augment.crop_scale_max = Reader::real_at(a, pa, "crop_max");
    cfg.augment.zoom_out_max = Reader::real_at(a, pa, "zoom_out");
    cfg.augment.seed = Reader::uint_at(a, pa, "seed");
    try {
        cfg.validate();
    } catch (const ConfigError &e) {
        throw CheckpointError(p, e.what());
    }
    return cfg;
}

} // namespace

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_real(std::string_view s) {
    const std::string str(s);
    char *end = nullptr;
    errno = 0;
    const double v = std::strtod(str.c_str(), &end);
    // ERANGE on underflow is fine: subnormals are finite and round-trip.
    if (str.empty() || end != str.c_str() + str.size() || !std::isfinite(v) ||
        (errno == ERANGE && std::abs(v) > 1.0)) {
        throw ConfigError("'" + str + "' is not a finite decimal real");
    }
    return v;
}

std::string checkpoint_to_json(const Checkpoint &ck) {
    const auto &c = ck.config;
    const auto &st = ck.state;
    json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["config"] = {
        {"qubits", c.qubits},
        {"lr", format_real(c.lr)},
        {"batch", c.batch},
        {"epochs", c.epochs},
        {"nmax", c.n_max},
        {"seed", c.seed},
        {"freeze_head", c.freeze_head},
        {"grad", std::string(grad_method_name(c.grad))},
        {"augment",
         {{"rotation", format_real(c.augment.rotation_degrees)},
          {"flip", format_real(c.augment.flip_probability)},
          {"crop_min", format_real(c.augment.crop_scale_min)},
          {"crop_max", format_real(c.augment.crop_scale_max)},
          {"zoom_out", format_real(c.augment.zoom_out_max)},
          {"seed", c.augment.seed}}}};
    j["feature_dim"] = ck.feature_dim;
    j["class_weights"] = reals(ck.class_weights);
    std::ostringstream rng;
    rng << st.rng;
    json history = json::array();
    for (const auto &h : st.history) {
        history.push_back({{"epoch", h.epoch},
                           {"train_loss", format_real(h.train_loss)},
                           {"train_acc", format_real(h.train_acc)},
                           {"val_loss", format_real(h.val_loss)},
                           {"val_acc", format_real(h.val_acc)},
                           {"steps", h.steps}});
    }
    j["state"] = {{"epoch", st.epoch},
                  {"best_epoch", st.best_epoch},
                  {"best_val_acc", format_real(st.best_val_acc)},
                  {"rng", rng.str()},
                  {"qcnn_params", reals(st.qparams.values())},
                  {"head", reals(st.head.values())},
                  {"adam_quantum", adam_json(st.adam_quantum)},
                  {"adam_head", adam_json(st.adam_head)},
                  {"history", std::move(history)}};
    return j.dump();
}

Checkpoint checkpoint_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw CheckpointError("", std::string("invalid JSON: ") + e.what());
    }
    if (Reader::string(Reader::field(j, "", "format"), "/format") != kFormat) {
        throw CheckpointError("/format", "not a qcnn checkpoint");
    }
    if (Reader::uint_at(j, "", "version") != kVersion) {
        throw CheckpointError("/version", "unsupported version");
    }
    const TrainConfig cfg = read_config(Reader::field(j, "", "config"));
    const std::size_t dim = Reader::uint_at(j, "", "feature_dim");
    if (dim == 0) {
        throw CheckpointError("/feature_dim", "must be positive");
    }
    Checkpoint ck{cfg, dim, {}, TrainState(cfg, dim)};
    Reader::reals_into(Reader::field(j, "", "class_weights"), "/class_weights",
                       ck.class_weights);
    for (std::size_t c = 0; c < ck.class_weights.size(); ++c) {
        if (!(ck.class_weights[c] > 0.0)) {
            throw CheckpointError("/class_weights/" + std::to_string(c),
                                  "must be positive");
        }
    }

    const json &s = Reader::field(j, "", "state");
    const std::string p = "/state";
    auto &st = ck.state;
    st.epoch = Reader::uint_at(s, p, "epoch");
    st.best_epoch = Reader::uint_at(s, p, "best_epoch");
    if (st.best_epoch > st.epoch) {
        throw CheckpointError(p + "/best_epoch", "exceeds epoch");
    }
    st.best_val_acc = Reader::real_at(s, p, "best_val_acc");
    std::istringstream rng(
        Reader::string(Reader::field(s, p, "rng"), p + "/rng"));
    rng >> st.rng;
    if (rng.fail()) {
        throw CheckpointError(p + "/rng", "malformed generator state");
    }
    Reader::reals_into(Reader::field(s, p, "qcnn_params"), p + "/qcnn_params",
                       st.qparams.values());
    Reader::reals_into(Reader::field(s, p, "head"), p + "/head",
                       st.head.values());
    read_adam(Reader::field(s, p, "adam_quantum"), p + "/adam_quantum",
              st.adam_quantum);
    read_adam(Reader::field(s, p, "adam_head"), p + "/adam_head", st.adam_head);
    const json &h = Reader::field(s, p, "history");
    if (!h.is_array()) {
        throw CheckpointError(p + "/history", "expected an array");
    }
    if (h.size() != st.epoch) {
        throw CheckpointError(p + "/history",
                              "length does not match the epoch count");
    }
    for (std::size_t i = 0; i < h.size(); ++i) {
        const std::string hp = p + "/history/" + std::to_string(i);
        EpochStats e;
        e.epoch = Reader::uint_at(h[i], hp, "epoch");
        e.train_loss = Reader::real_at(h[i], hp, "train_loss");
        e.train_acc = Reader::real_at(h[i], hp, "train_acc");
        e.val_loss = Reader::real_at(h[i], hp, "val_loss");
        e.val_acc = Reader::real_at(h[i], hp, "val_acc");
        e.steps = Reader::uint_at(h[i], hp, "steps");
        st.history.push_back(e);
    }
    return ck;
}

void save_checkpoint(const std::filesystem::path &path, const Checkpoint &ck) {
    const std::string text = checkpoint_to_json(ck);
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << text;
        if (!out) {
            throw std::runtime_error("cannot write checkpoint " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open checkpoint " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return checkpoint_from_json(ss.str());
}

} // namespace qcnn::train
