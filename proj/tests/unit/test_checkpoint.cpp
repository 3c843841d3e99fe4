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

#include <filesystem>
#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "qcnn/checkpoint.hpp"
#include "qcnn/errors.hpp"

using namespace qcnn;
using nlohmann::json;

namespace {

train::Checkpoint sample_checkpoint() {
    train::TrainConfig cfg;
    cfg.qubits = 8;
    cfg.lr = 0.1 + 0.2; // not exactly representable
    cfg.seed = 99;
    cfg.grad = train::GradMethod::Shift;
    train::Checkpoint ck{cfg, 6, {1.0 / 3.0, 0.7, 2.2604, 1e-300},
                         train::init_state(cfg, 6)};
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    for (auto &v : ck.state.adam_head.m) {
        v = g(rng) * 1e-7;
    }
    for (auto &v : ck.state.adam_quantum.v) {
        v = std::abs(g(rng));
    }
    ck.state.adam_head.step = 12;
    ck.state.adam_quantum.step = 12;
    ck.state.epoch = 2;
    ck.state.best_epoch = 1;
    ck.state.best_val_acc = 0.625;
    ck.state.history = {{1, 1.3, 0.4, 1.25, 0.625, 10}, {2, 1.1, 0.5, 1.2, 0.5, 10}};
    (void)ck.state.rng();
    return ck;
}

std::string pointer_of(const std::string &text) {
    try {
        (void)train::checkpoint_from_json(text);
    } catch (const CheckpointError &e) {
        return e.pointer();
    }
    return "<none>";
}

} // namespace

TEST(checkpoint, json_round_trip_is_bitwise) {
    const auto ck = sample_checkpoint();
    const auto text = train::checkpoint_to_json(ck);
    const auto back = train::checkpoint_from_json(text);
    EXPECT_EQ(back.config.lr, ck.config.lr);
    EXPECT_EQ(back.config.grad, train::GradMethod::Shift);
    EXPECT_EQ(back.class_weights, ck.class_weights);
    EXPECT_EQ(back.state.qparams, ck.state.qparams);
    EXPECT_EQ(back.state.head, ck.state.head);
    EXPECT_EQ(back.state.adam_head, ck.state.adam_head);
    EXPECT_EQ(back.state.adam_quantum, ck.state.adam_quantum);
    EXPECT_EQ(back.state.history, ck.state.history);
    EXPECT_EQ(back.state.rng, ck.state.rng);
    EXPECT_EQ(back.state.best_val_acc, 0.625);
    EXPECT_EQ(train::checkpoint_to_json(back), text);
}

TEST(checkpoint, file_round_trip) {
    const auto dir = std::filesystem::temp_directory_path() / "qcnn_ckpt_file";
    std::filesystem::remove_all(dir);
    const auto ck = sample_checkpoint();
    train::save_checkpoint(dir / "c.json", ck);
    EXPECT_FALSE(std::filesystem::exists(dir / "c.json.tmp"));
    const auto back = train::load_checkpoint(dir / "c.json");
    EXPECT_EQ(back.state.head, ck.state.head);
    EXPECT_THROW((void)train::load_checkpoint(dir / "missing.json"), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST(checkpoint, errors_point_at_field) {
    const json good = json::parse(train::checkpoint_to_json(sample_checkpoint()));
    auto j = good;
    j["state"]["head"][3] = "abc";
    EXPECT_EQ(pointer_of(j.dump()), "/state/head/3");
    j = good;
    j["state"]["head"][0] = 1.5;
    EXPECT_EQ(pointer_of(j.dump()), "/state/head/0");
    j = good;
    j["config"]["qubits"] = 10;
    EXPECT_EQ(pointer_of(j.dump()), "/config/qubits");
    j = good;
    j["state"].erase("epoch");
    EXPECT_EQ(pointer_of(j.dump()), "/state/epoch");
    j = good;
    j["state"]["qcnn_params"].erase(0);
    EXPECT_EQ(pointer_of(j.dump()), "/state/qcnn_params");
    j = good;
    j["format"] = "other";
    EXPECT_EQ(pointer_of(j.dump()), "/format");
    j = good;
    j["config"]["grad"] = "backprop";
    EXPECT_EQ(pointer_of(j.dump()), "/config/grad");
    j = good;
    j["state"]["rng"] = "1 2 3";
    EXPECT_EQ(pointer_of(j.dump()), "/state/rng");
    EXPECT_EQ(pointer_of("{not json"), "");
}

TEST(checkpoint, real_formatting_round_trips) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> bits;
    for (int i = 0; i < 2000; ++i) {
        const double v = std::bit_cast<double>(bits(rng));
        if (!std::isfinite(v)) {
            continue;
        }
        EXPECT_EQ(train::parse_real(train::format_real(v)), v);
    }
    EXPECT_THROW(train::parse_real("1.5x"), ConfigError);
    EXPECT_THROW(train::parse_real(""), ConfigError);
    EXPECT_THROW(train::parse_real("inf"), ConfigError);
    EXPECT_THROW(train::parse_real("1e999"), ConfigError);
}
