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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "qcnn/data.hpp"
#include "qcnn/errors.hpp"

using namespace qcnn;
using data::Label;

namespace {

data::Manifest make_manifest(const data::ClassCounts &counts) {
    data::Manifest m;
    for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t i = 0; i < counts[c]; ++i) {
            const std::string id = std::string(data::label_name(Label(c))) + "-" +
                                   std::to_string(i);
            m.records.push_back({id, id + ".jpg", Label(c)});
        }
    }
    return m;
}

std::vector<Label> make_labels(const data::ClassCounts &counts) {
    return make_manifest(counts).labels();
}

data::FeatureSet small_set(std::uint32_t dim, std::size_t n) {
    data::FeatureSet s;
    s.dim = dim;
    for (std::size_t i = 0; i < n; ++i) {
        data::FeatureRecord r{"rec" + std::to_string(i), Label(i % 4), {}};
        for (std::uint32_t k = 0; k < dim; ++k) {
            r.values.push_back(static_cast<float>(i) * 0.5f - static_cast<float>(k));
        }
        s.records.push_back(std::move(r));
    }
    return s;
}

std::string format_message(const std::vector<std::uint8_t> &bytes) {
    try {
        (void)data::decode_features(bytes);
    } catch (const FormatError &e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(data, label_names_round_trip) {
    for (std::size_t c = 0; c < 4; ++c) {
        EXPECT_EQ(data::parse_label(data::label_name(Label(c))), Label(c));
    }
    EXPECT_THROW(data::parse_label("tumor"), ConfigError);
    EXPECT_THROW(data::label_from_code(4), FormatError);
}

TEST(data, split_sizes_floor_then_remainder) {
    EXPECT_EQ(data::split_sizes(5077, {}), (std::array<std::size_t, 3>{4061, 507, 509}));
    EXPECT_EQ(data::split_sizes(1377, {}), (std::array<std::size_t, 3>{1101, 137, 139}));
    EXPECT_EQ(data::split_sizes(10, {}), (std::array<std::size_t, 3>{8, 1, 1}));
}

TEST(data, split_is_stratified_disjoint_exhaustive) {
    const auto m = make_manifest({5077, 3709, 1377, 2283});
    const auto s = data::split(m, {}, 3);
    EXPECT_EQ(data::class_counts(s.train.labels()),
              (data::ClassCounts{4061, 2967, 1101, 1826}));
    EXPECT_EQ(data::class_counts(s.val.labels()),
              (data::ClassCounts{507, 370, 137, 228}));
    std::set<std::string> ids;
    for (const auto *part : {&s.train, &s.val, &s.test}) {
        for (const auto &r : part->records) {
            EXPECT_TRUE(ids.insert(r.id).second) << r.id;
        }
    }
    EXPECT_EQ(ids.size(), m.size());
}

TEST(data, split_ignores_manifest_order) {
    auto m = make_manifest({40, 30, 20, 10});
    const auto a = data::split(m, {}, 17);
    std::reverse(m.records.begin(), m.records.end());
    const auto b = data::split(m, {}, 17);
    EXPECT_EQ(a.train.records, b.train.records);
    EXPECT_EQ(a.test.records, b.test.records);
    const auto c = data::split(m, {}, 18);
    EXPECT_NE(a.train.records, c.train.records);
}

TEST(data, weights_inverse_to_counts) {
    const auto labels = make_labels({4061, 2967, 1101, 1826});
    const auto w = data::class_weights(labels);
    EXPECT_NEAR(w[2], 9955.0 / 4.0 / 1101.0, 1e-12);
    EXPECT_NEAR(w[2], 2.2604, 1e-4);
    const double mean = (4061 * w[0] + 2967 * w[1] + 1101 * w[2] + 1826 * w[3]) / 9955.0;
    EXPECT_NEAR(mean, 1.0, 1e-12);
    EXPECT_THROW(data::class_weights(make_labels({3, 0, 2, 1})), ConfigError);
}

TEST(data, sampler_draw_count_and_balance) {
    const auto labels = make_labels({4061, 2967, 1101, 1826});
    const auto plan = data::SamplerPlan::inverse_frequency(labels, 1000, 5);
    EXPECT_EQ(plan.draws, 4000u);
    const auto idx = data::weighted_sample(plan, labels);
    ASSERT_EQ(idx.size(), 4000u);
    data::ClassCounts per{};
    for (const auto i : idx) {
        ASSERT_LT(i, labels.size());
        ++per[data::index_of(labels[i])];
    }
    for (const auto c : per) {
        // Binomial(4000, 1/4): sd about 27.4.
        EXPECT_NEAR(static_cast<double>(c), 1000.0, 5 * 27.4);
    }
    EXPECT_EQ(idx, data::weighted_sample(plan, labels));
}

TEST(data, sampler_single_class) {
    const auto labels = make_labels({0, 0, 7, 0});
    const auto plan = data::SamplerPlan::inverse_frequency(labels, 10, 1);
    const auto idx = data::weighted_sample(plan, labels);
    EXPECT_EQ(idx.size(), 40u);
    std::set<std::size_t> seen(idx.begin(), idx.end());
    EXPECT_LE(*seen.rbegin(), 6u);
    EXPECT_GT(seen.size(), 4u);
    EXPECT_THROW(data::weighted_sample(plan, {}), ConfigError);
}

TEST(data, codec_round_trip) {
    const auto s = small_set(2048, 3);
    const auto bytes = data::encode_features(s);
    EXPECT_EQ(bytes.size(), 14u + 3 * (2 + 4 + 1 + 4 * 2048));
    EXPECT_EQ(data::decode_features(bytes), s);
}

TEST(data, codec_empty_set) {
    data::FeatureSet s;
    s.dim = 16;
    const auto bytes = data::encode_features(s);
    EXPECT_EQ(bytes.size(), data::kFeatureHeaderBytes);
    EXPECT_EQ(data::decode_features(bytes), s);
}

TEST(data, codec_header_layout) {
    const auto bytes = data::encode_features(small_set(3, 2));
    const std::vector<std::uint8_t> head(bytes.begin(), bytes.begin() + 14);
    EXPECT_EQ(head, (std::vector<std::uint8_t>{'Q', 'C', 'N', 'F', 1, 0, 2, 0, 0,
                                               0, 3, 0, 0, 0}));
}

TEST(data, truncation_reports_offset) {
    auto bytes = data::encode_features(small_set(4, 2));
    bytes.resize(bytes.size() - 3);
    try {
        (void)data::decode_features(bytes);
        FAIL() << "expected FormatError";
    } catch (const FormatError &e) {
        // Second record: header 14, record 1 is 2+4+1+16 = 23 bytes.
        EXPECT_EQ(e.offset(), 14u + 23 + 2 + 4 + 1);
        const std::string msg = e.what();
        EXPECT_NE(msg.find("feature vector needs 16 bytes"), std::string::npos) << msg;
        EXPECT_NE(msg.find("got " + std::to_string(bytes.size())), std::string::npos);
    }
    EXPECT_NE(format_message({'Q', 'C'}).find("magic"), std::string::npos);
}

TEST(data, codec_rejects_corruption) {
    const auto good = data::encode_features(small_set(2, 1));
    auto b = good;
    b[2] = 'X';
    EXPECT_NE(format_message(b).find("offset 2"), std::string::npos);
    b = good;
    b[4] = 2;
    EXPECT_NE(format_message(b).find("version 2"), std::string::npos);
    b = good;
    b[14 + 2 + 4] = 9; // label of record 0
    EXPECT_NE(format_message(b).find("label code 9"), std::string::npos);
    b = good;
    b.push_back(0);
    EXPECT_NE(format_message(b).find("trailing"), std::string::npos);
    b = good;
    b[b.size() - 1] = 0x7F; // 0x7F800000-ish exponent
    b[b.size() - 2] = 0x80;
    EXPECT_NE(format_message(b).find("non-finite"), std::string::npos);
}

TEST(data, feature_set_validation) {
    auto s = small_set(3, 2);
    s.records[1].values.pop_back();
    EXPECT_THROW(s.validate(), ConfigError);
    EXPECT_THROW((void)data::encode_features(s), ConfigError);
}

TEST(data, feature_file_errors_name_path) {
    const auto dir = std::filesystem::temp_directory_path() / "qcnn_data_files";
    std::filesystem::create_directories(dir);
    const auto s = small_set(5, 3);
    data::write_features(dir / "f.qcnf", s);
    EXPECT_EQ(data::read_features(dir / "f.qcnf"), s);
    {
        std::ofstream(dir / "bad.qcnf", std::ios::binary) << "QCNF";
    }
    try {
        (void)data::read_features(dir / "bad.qcnf");
        FAIL();
    } catch (const FormatError &e) {
        EXPECT_NE(std::string(e.what()).find("bad.qcnf"), std::string::npos);
        EXPECT_EQ(e.offset(), 4u);
    }
    std::filesystem::remove_all(dir);
}

TEST(data, manifest_parsing) {
    const auto m = data::parse_manifest(
        "id,path,label\n"
        "a1,img/a1.jpg,Normal\n"
        "\"b,2\",\"dir with, comma/b.png\",Tumor\r\n");
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m.records[1].id, "b,2");
    EXPECT_EQ(m.records[1].path, "dir with, comma/b.png");
    EXPECT_EQ(m.records[1].label, Label::Tumor);
    EXPECT_THROW(data::parse_manifest("x,y,z\n"), ConfigError);
    EXPECT_THROW(data::parse_manifest("id,path,label\na,b,Kidney\n"), ConfigError);
    EXPECT_THROW(data::parse_manifest("id,path,label\na,b,Cyst\na,c,Cyst\n"),
                 ConfigError);
}

TEST(data, manifest_write_read) {
    const auto dir = std::filesystem::temp_directory_path() / "qcnn_data_manifest";
    std::filesystem::create_directories(dir);
    data::Manifest m;
    m.records = {{"x", "p/x.png", Label::Cyst}, {"y\"q", "p, q/y.png", Label::Stone}};
    data::write_manifest(dir / "m.csv", m);
    EXPECT_EQ(data::read_manifest(dir / "m.csv").records, m.records);
    std::filesystem::remove_all(dir);
}
