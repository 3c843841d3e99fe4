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

#include "qcnn/data.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "qcnn/errors.hpp"

namespace qcnn::data {
namespace {

constexpr std::array<std::string_view, kNumClasses> kNames{"Normal", "Cyst",
                                                           "Stone", "Tumor"};

std::vector<std::string> split_csv_line(std::string_view line,
                                        std::size_t line_no) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) {
        throw ConfigError("manifest line " + std::to_string(line_no) +
                          ": unterminated quote");
    }
    out.push_back(std::move(cur));
    return out;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (const char c : s) {
        if (c == '"') {
            q += '"';
        }
        q += c;
    }
    return q + '"';
}

class Writer {
  public:
    void u8(std::uint8_t v) { buf.push_back(v); }
    void u16(std::uint16_t v) {
        u8(static_cast<std::uint8_t>(v));
        u8(static_cast<std::uint8_t>(v >> 8));
    }
    void u32(std::uint32_t v) {
        for (int s = 0; s < 32; s += 8) {
            u8(static_cast<std::uint8_t>(v >> s));
        }
    }
    std::vector<std::uint8_t> buf;
};

class Reader {
  public:
    explicit Reader(std::span<const std::uint8_t> b) : bytes(b) {}

    void need(std::size_t n, const char *field) const {
        if (bytes.size() - pos < n) {
            throw FormatError("truncated feature file: " + std::string(field) +
                                  " needs " + std::to_string(n) +
                                  " bytes at offset " + std::to_string(pos) +
                                  ", expected at least " +
                                  std::to_string(pos + n) + " bytes, got " +
                                  std::to_string(bytes.size()),
                              pos);
        }
    }
    std::uint8_t u8(const char *field) {
        need(1, field);
        return bytes[pos++];
    }
    std::uint16_t u16(const char *field) {
        need(2, field);
        const auto v = static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
        pos += 2;
        return v;
    }
    std::uint32_t u32(const char *field) {
        need(4, field);
        std::uint32_t v = 0;
        for (int k = 3; k >= 0; --k) {
            v = (v << 8) | bytes[pos + static_cast<std::size_t>(k)];
        }
        pos += 4;
        return v;
    }

    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;
};

} // namespace

std::string_view label_name(Label label) { return kNames.at(index_of(label)); }

Label parse_label(std::string_view name) {
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        if (kNames[c] == name) {
            return static_cast<Label>(c);
        }
    }
    throw ConfigError("unknown label '" + std::string(name) +
                      "' (expected Normal, Cyst, Stone or Tumor)");
}

Label label_from_code(std::uint8_t code) {
    if (code >= kNumClasses) {
        throw FormatError("label code " + std::to_string(code) + " out of range",
                          0);
    }
    return static_cast<Label>(code);
}

void Manifest::validate() const {
    std::set<std::string_view> seen;
    for (const auto &r : records) {
        if (r.id.empty()) {
            throw ConfigError("manifest contains an empty sample id");
        }
        if (!seen.insert(r.id).second) {
            throw ConfigError("duplicate sample id '" + r.id + "'");
        }
    }
}

std::vector<Label> Manifest::labels() const {
    std::vector<Label> out;
    out.reserve(records.size());
    for (const auto &r : records) {
        out.push_back(r.label);
    }
    return out;
}

Manifest parse_manifest(std::string_view text) {
    Manifest m;
    std::size_t line_no = 0;
    bool header = true;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{}
                                            : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        auto fields = split_csv_line(line, line_no);
        if (header) {
            if (fields != std::vector<std::string>{"id", "path", "label"}) {
                throw ConfigError("manifest header must be 'id,path,label'");
            }
            header = false;
            continue;
        }
        if (fields.size() != 3) {
            throw ConfigError("manifest line " + std::to_string(line_no) +
                              ": expected 3 fields, got " +
                              std::to_string(fields.size()));
        }
        try {
            m.records.push_back({std::move(fields[0]), std::move(fields[1]),
                                 parse_label(fields[2])});
        } catch (const ConfigError &e) {
            throw ConfigError("manifest line " + std::to_string(line_no) +
                              ": " + e.what());
        }
    }
    if (header) {
        throw ConfigError("manifest is empty (missing header)");
    }
    m.validate();
    return m;
}

Manifest read_manifest(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open manifest " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_manifest(ss.str());
    } catch (const ConfigError &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_manifest(const std::filesystem::path &path, const Manifest &m) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "id,path,label\n";
    for (const auto &r : m.records) {
        out << csv_field(r.id) << ',' << csv_field(r.path) << ','
            << label_name(r.label) << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios &r) {
    // The epsilon keeps e.g. 0.8 * 10 from flooring to 7.
    const auto nd = static_cast<double>(n);
    const auto tr = static_cast<std::size_t>(std::floor(r.train * nd + 1e-9));
    const auto va = static_cast<std::size_t>(std::floor(r.val * nd + 1e-9));
    if (tr + va > n) {
        throw ConfigError("split ratios exceed the class size");
    }
    return {tr, va, n - tr - va};
}

Split split(const Manifest &manifest, const SplitRatios &ratios,
            std::uint64_t seed) {
    for (const double r : {ratios.train, ratios.val, ratios.test}) {
        if (!(r >= 0.0 && r <= 1.0)) {
            throw ConfigError("split ratios must lie in [0, 1]");
        }
    }
    if (std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
        throw ConfigError("split ratios must sum to 1");
    }
    manifest.validate();
    std::array<std::vector<const ManifestRecord *>, kNumClasses> by_class;
    for (const auto &r : manifest.records) {
        by_class[index_of(r.label)].push_back(&r);
    }
    std::mt19937_64 rng(seed);
    Split out;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        auto &rows = by_class[c];
        if (rows.empty()) {
            throw ConfigError("class " + std::string(kNames[c]) +
                              " has no samples");
        }
        std::sort(rows.begin(), rows.end(),
                  [](const auto *a, const auto *b) { return a->id < b->id; });
        // Fisher-Yates with an explicit draw so the order is portable.
        for (std::size_t i = rows.size() - 1; i > 0; --i) {
            const std::size_t j = rng() % (i + 1);
            std::swap(rows[i], rows[j]);
        }
        const auto [tr, va, te] = split_sizes(rows.size(), ratios);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto &dst = i < tr ? out.train : (i < tr + va ? out.val : out.test);
            dst.records.push_back(*rows[i]);
        }
    }
    return out;
}

ClassCounts class_counts(std::span<const Label> labels) {
    ClassCounts n{};
    for (const Label l : labels) {
        ++n.at(index_of(l));
    }
    return n;
}

ClassWeights class_weights(std::span<const Label> labels) {
    const ClassCounts n = class_counts(labels);
    ClassWeights w{};
    const double quarter = static_cast<double>(labels.size()) / kNumClasses;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        if (n[c] == 0) {
            throw ConfigError("class " + std::string(kNames[c]) +
                              " is missing from the training split");
        }
        w[c] = quarter / static_cast<double>(n[c]);
    }
    return w;
}

SamplerPlan SamplerPlan::inverse_frequency(std::span<const Label> labels,
                                           std::size_t n_max,
                                           std::uint64_t seed) {
    const ClassCounts n = class_counts(labels);
    SamplerPlan plan;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        plan.weights[c] = n[c] == 0 ? 0.0 : 1.0 / static_cast<double>(n[c]);
    }
    plan.draws = n_max * kNumClasses;
    plan.seed = seed;
    return plan;
}

std::vector<std::size_t> weighted_sample(const SamplerPlan &plan,
                                         std::span<const Label> labels) {
    if (labels.empty()) {
        throw ConfigError("cannot sample from an empty label set");
    }
    std::array<std::vector<std::size_t>, kNumClasses> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        members[index_of(labels[i])].push_back(i);
    }
    // Two-stage draw: class with mass w_c * n_c, then a uniform member.
    // This is exactly P(i) proportional to w_{class(i)}.
    std::array<double, kNumClasses> mass{};
    double total = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        if (plan.weights[c] < 0.0 || !std::isfinite(plan.weights[c])) {
            throw ConfigError("sampler weights must be finite and nonnegative");
        }
        mass[c] = plan.weights[c] * static_cast<double>(members[c].size());
        total += mass[c];
    }
    if (!(total > 0.0)) {
        throw ConfigError("sampler weights give zero total mass");
    }
    std::mt19937_64 rng(plan.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::size_t> out;
    out.reserve(plan.draws);
    for (std::size_t d = 0; d < plan.draws; ++d) {
        const double u = unit(rng) * total;
        double acc = 0.0;
        std::size_t c = 0;
        for (; c + 1 < kNumClasses; ++c) {
            acc += mass[c];
            if (u < acc) {
                break;
            }
        }
        while (mass[c] == 0.0) { // u landed on the top edge
            --c;
        }
        const auto &pool = members[c];
        out.push_back(pool[rng() % pool.size()]);
    }
    return out;
}

std::vector<Label> FeatureSet::labels() const {
    std::vector<Label> out;
    out.reserve(records.size());
    for (const auto &r : records) {
        out.push_back(r.label);
    }
    return out;
}

void FeatureSet::validate() const {
    for (const auto &r : records) {
        if (r.values.size() != dim) {
            throw ConfigError("record '" + r.id + "' has " +
                              std::to_string(r.values.size()) +
                              " values, header dim is " + std::to_string(dim));
        }
        if (r.id.size() > 0xFFFF) {
            throw ConfigError("record id longer than 65535 bytes");
        }
        for (const float v : r.values) {
            if (!std::isfinite(v)) {
                throw ConfigError("record '" + r.id +
                                  "' contains a non-finite value");
            }
        }
    }
}

std::vector<std::uint8_t> encode_features(const FeatureSet &set) {
    set.validate();
    if (set.records.size() > 0xFFFFFFFFu) {
        throw ConfigError("too many records for a feature file");
    }
    Writer w;
    for (const char c : kFeatureMagic) {
        w.u8(static_cast<std::uint8_t>(c));
    }
    w.u16(kFeatureVersion);
    w.u32(static_cast<std::uint32_t>(set.records.size()));
    w.u32(set.dim);
    for (const auto &r : set.records) {
        w.u16(static_cast<std::uint16_t>(r.id.size()));
        for (const char c : r.id) {
            w.u8(static_cast<std::uint8_t>(c));
        }
        w.u8(static_cast<std::uint8_t>(r.label));
        for (const float v : r.values) {
            w.u32(std::bit_cast<std::uint32_t>(v));
        }
    }
    return std::move(w.buf);
}

FeatureSet decode_features(std::span<const std::uint8_t> bytes) {
    Reader in(bytes);
    in.need(4, "magic");
    for (std::size_t k = 0; k < 4; ++k) {
        if (bytes[k] != static_cast<std::uint8_t>(kFeatureMagic[k])) {
            throw FormatError("bad magic: expected 'QCNF'", k);
        }
    }
    in.pos = 4;
    const std::size_t ver_at = in.pos;
    const std::uint16_t version = in.u16("version");
    if (version != kFeatureVersion) {
        throw FormatError("unsupported version " + std::to_string(version) +
                              " (expected 1)",
                          ver_at);
    }
    const std::uint32_t count = in.u32("record count");
    const std::size_t dim_at = in.pos;
    FeatureSet set;
    set.dim = in.u32("feature dim");
    if (count > 0 && set.dim == 0) {
        throw FormatError("feature dim is zero", dim_at);
    }
    // Reserve only what could fit, so a corrupt count cannot exhaust memory.
    const std::size_t min_record = 3 + std::size_t{4} * set.dim;
    set.records.reserve(std::min<std::size_t>(
        count, (bytes.size() - in.pos) / std::max<std::size_t>(min_record, 1)));
    for (std::uint32_t i = 0; i < count; ++i) {
        FeatureRecord r;
        const std::uint16_t len = in.u16("id length");
        in.need(len, "id");
        r.id.assign(reinterpret_cast<const char *>(bytes.data() + in.pos), len);
        in.pos += len;
        const std::size_t label_at = in.pos;
        const std::uint8_t code = in.u8("label");
        if (code >= kNumClasses) {
            throw FormatError("label code " + std::to_string(code) +
                                  " out of range in record " + std::to_string(i),
                              label_at);
        }
        r.label = static_cast<Label>(code);
        in.need(std::size_t{4} * set.dim, "feature vector");
        r.values.resize(set.dim);
        for (std::uint32_t k = 0; k < set.dim; ++k) {
            const std::size_t at = in.pos;
            r.values[k] = std::bit_cast<float>(in.u32("value"));
            if (!std::isfinite(r.values[k])) {
                throw FormatError("non-finite value in record " +
                                      std::to_string(i),
                                  at);
            }
        }
        set.records.push_back(std::move(r));
    }
    if (in.pos != bytes.size()) {
        throw FormatError("trailing bytes after " + std::to_string(count) +
                              " records: expected " + std::to_string(in.pos) +
                              " bytes, got " + std::to_string(bytes.size()),
                          in.pos);
    }
    return set;
}

void write_features(const std::filesystem::path &path, const FeatureSet &set) {
    const auto bytes = encode_features(set);
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

FeatureSet read_features(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open feature file " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    try {
        return decode_features(bytes);
    } catch (const FormatError &e) {
        throw FormatError(path.string() + ": " + e.detail(), e.offset());
    }
}

} // namespace qcnn::data
