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
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "qcnn/cli.hpp"
#include "qcnn/data.hpp"
#include "qcnn/imgproc.hpp"

using namespace qcnn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string &name) {
    const auto d = fs::temp_directory_path() / ("qcnn_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path &p, const std::string &text) {
    std::ofstream(p, std::ios::binary) << text;
}

// Synthetic features plus one short training run shared by several tests.
class CliRun : public ::testing::Test {
  protected:
    static void SetUpTestSuite() {
        dir_ = fresh_dir("run");
        ASSERT_EQ(run({"synth", "--out", (dir_ / "f").string(), "--dim", "6",
                       "--per-class", "10", "--eval-per-class", "4", "--seed", "3"})
                      .code,
                  0);
        const auto r = run(train_args(dir_ / "run"));
        ASSERT_EQ(r.code, 0) << r.err;
    }
    static void TearDownTestSuite() { fs::remove_all(dir_); }

    static std::vector<std::string> train_args(const fs::path &out) {
        return {"train",    "--train",  (dir_ / "f/train.qcnf").string(),
                "--val",    (dir_ / "f/val.qcnf").string(),
                "--test",   (dir_ / "f/test.qcnf").string(),
                "--out",    out.string(), "--qubits", "8", "--epochs", "2",
                "--nmax",   "5",          "--batch",  "4"};
    }

    static fs::path dir_;
};

fs::path CliRun::dir_;

} // namespace

TEST(cli, usage_errors_exit_2) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"selftest", "--bogus"}).code, 2);
    EXPECT_EQ(run({"train", "--train", "x"}).code, 2);
    EXPECT_EQ(run({"selftest", "--inject-fault", "nope"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(cli, missing_file_names_path) {
    const auto r = run({"train", "--train", "/nonexistent/a.qcnf", "--val",
                        "/nonexistent/b.qcnf", "--test", "/nonexistent/c.qcnf",
                        "--qubits", "8"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("/nonexistent/a.qcnf"), std::string::npos) << r.err;
}

TEST(cli, selftest_passes_and_detects_fault) {
    const auto ok = run({"selftest"});
    EXPECT_EQ(ok.code, 0) << ok.out;
    EXPECT_NE(ok.out.find("4/4 checks passed"), std::string::npos) << ok.out;
    const auto bad = run({"selftest", "--inject-fault", "gate-typo"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.out.find("FAIL kernel-vs-dense"), std::string::npos) << bad.out;
}

TEST_F(CliRun, train_writes_bundle) {
    for (const char *f : {"checkpoint_best.json", "checkpoint_last.json", "curves.csv",
                          "confusion.csv", "metrics.json", "curves.png",
                          "confusion.png"}) {
        EXPECT_TRUE(fs::exists(dir_ / "run" / f)) << f;
    }
    const auto j = nlohmann::json::parse(slurp(dir_ / "run/metrics.json"));
    EXPECT_TRUE(j.contains("accuracy"));
    EXPECT_TRUE(j.contains("confusion"));
}

TEST_F(CliRun, latent_conflict_exits_2) {
    auto args = train_args(dir_ / "conflict");
    args.insert(args.end(), {"--latent", "8"});
    const auto r = run(args);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--latent"), std::string::npos) << r.err;
}

TEST_F(CliRun, eval_checks_qubits_and_checkpoint) {
    const auto ck = (dir_ / "run/checkpoint_best.json").string();
    const auto feats = (dir_ / "f/test.qcnf").string();
    const auto ev = dir_ / "eval";
    const auto ok = run({"eval", "--checkpoint", ck, "--features", feats, "--out",
                         ev.string()});
    EXPECT_EQ(ok.code, 0) << ok.err;
    EXPECT_EQ(slurp(ev / "metrics.json"), slurp(dir_ / "run/metrics.json"));
    EXPECT_EQ(run({"eval", "--checkpoint", ck, "--features", feats, "--qubits", "12"})
                  .code,
              2);

    auto j = nlohmann::json::parse(slurp(ck));
    j["state"]["head"][3] = "oops";
    write_file(dir_ / "broken.json", j.dump());
    const auto bad = run({"eval", "--checkpoint", (dir_ / "broken.json").string(),
                          "--features", feats});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("/state/head/3"), std::string::npos) << bad.err;

    write_file(dir_ / "short.qcnf", "QCNF\x01");
    const auto trunc = run({"eval", "--checkpoint", ck, "--features",
                            (dir_ / "short.qcnf").string()});
    EXPECT_EQ(trunc.code, 2);
    EXPECT_NE(trunc.err.find("offset"), std::string::npos) << trunc.err;
}

TEST_F(CliRun, config_file_and_unknown_key) {
    write_file(dir_ / "good.ini", "epochs = 1\nnmax = 3\n");
    auto args = train_args(dir_ / "cfg");
    args.insert(args.end(), {"--config", (dir_ / "good.ini").string()});
    // Command-line values win over the file.
    const auto r = run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("epoch 2/2"), std::string::npos) << r.out;

    write_file(dir_ / "bad.ini", "epochs = 1\nwarp_factor = 9\n");
    auto bad = train_args(dir_ / "cfg2");
    bad.insert(bad.end(), {"--config", (dir_ / "bad.ini").string()});
    EXPECT_EQ(run(bad).code, 2);
}

TEST_F(CliRun, resume_from_stop) {
    auto first = train_args(dir_ / "part");
    first.insert(first.end(), {"--stop-after", "1"});
    const auto a = run(first);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_NE(a.out.find("stopped after epoch 1"), std::string::npos);
    auto second = train_args(dir_ / "rest");
    second.insert(second.end(),
                  {"--resume", (dir_ / "part/checkpoint_last.json").string()});
    const auto b = run(second);
    EXPECT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(slurp(dir_ / "rest/metrics.json"), slurp(dir_ / "run/metrics.json"));
}

TEST(cli, preprocess_outputs_and_failures) {
    const auto dir = fresh_dir("pre");
    const auto src = dir / "src";
    fs::create_directories(src);
    std::mt19937_64 rng(1);
    data::Manifest m;
    const char *labels[] = {"Normal", "Cyst", "Stone", "Tumor"};
    for (int i = 0; i < 4; ++i) {
        img::GrayImage g(40, 32);
        for (auto &p : g.data) {
            p = static_cast<std::uint8_t>(rng() % 200);
        }
        const auto p = src / ("img" + std::to_string(i) + ".png");
        img::write_png(p, g);
        m.records.push_back({"id" + std::to_string(i), p.string(),
                             data::parse_label(labels[i])});
    }
    data::write_manifest(dir / "m.csv", m);
    const auto out = dir / "out";
    const auto r = run({"preprocess", "--manifest", (dir / "m.csv").string(), "--out",
                        out.string(), "--compare", "2", "--augment", "1"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("6 written"), std::string::npos) << r.out;
    const auto made = data::read_manifest(out / "manifest.csv");
    EXPECT_EQ(made.size(), 6u);
    EXPECT_EQ(made.records[3].id, "id2#aug0");
    const auto first = img::read_image(made.records[0].path);
    EXPECT_EQ(first.width, 40u);
    const auto sheet = img::read_image(out / "compare" / "id0.png");
    EXPECT_EQ(sheet.width, 4u * 40 + 12);
    EXPECT_TRUE(fs::exists(out / "compare" / "id1.png"));
    EXPECT_FALSE(fs::exists(out / "compare" / "id2.png"));

    const auto again = run({"preprocess", "--manifest", (dir / "m.csv").string(),
                            "--out", out.string(), "--augment", "1"});
    EXPECT_EQ(again.code, 0);
    EXPECT_NE(again.out.find("0 written, 6 skipped"), std::string::npos) << again.out;

    write_file(src / "junk.png", "not an image");
    m.records.push_back({"junk", (src / "junk.png").string(), data::Label::Cyst});
    data::write_manifest(dir / "m2.csv", m);
    const auto fail = run({"preprocess", "--manifest", (dir / "m2.csv").string(),
                           "--out", (dir / "out2").string()});
    EXPECT_EQ(fail.code, 1);
    EXPECT_NE(slurp(dir / "out2/failures.csv").find("junk"), std::string::npos);
    EXPECT_EQ(data::read_manifest(dir / "out2/manifest.csv").size(), 4u);
    fs::remove_all(dir);
}

TEST(cli, split_writes_three_manifests) {
    const auto dir = fresh_dir("split");
    data::Manifest m;
    for (int i = 0; i < 40; ++i) {
        m.records.push_back({"r" + std::to_string(i), "p.png", data::Label(i % 4)});
    }
    data::write_manifest(dir / "m.csv", m);
    const auto r = run({"split", "--manifest", (dir / "m.csv").string(), "--out",
                        dir.string(), "--seed", "4"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(data::read_manifest(dir / "train.csv").size(), 32u);
    EXPECT_EQ(data::read_manifest(dir / "val.csv").size(), 4u);
    EXPECT_EQ(data::read_manifest(dir / "test.csv").size(), 4u);
    fs::remove_all(dir);
}

TEST(cli, synth_feature_files) {
    const auto dir = fresh_dir("synth");
    ASSERT_EQ(run({"synth", "--out", dir.string(), "--dim", "16", "--per-class", "5",
                   "--eval-per-class", "2"})
                  .code,
              0);
    const auto tr = data::read_features(dir / "train.qcnf");
    EXPECT_EQ(tr.dim, 16u);
    EXPECT_EQ(tr.size(), 20u);
    EXPECT_EQ(data::read_features(dir / "val.qcnf").size(), 8u);
    EXPECT_EQ(run({"synth", "--out", dir.string(), "--dim", "2"}).code, 2);
    fs::remove_all(dir);
}
