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

#include "qcnn/selftest.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "qcnn/circuit.hpp"
#include "qcnn/data.hpp"
#include "qcnn/grad.hpp"
#include "qcnn/oracle.hpp"

namespace qcnn::selftest {
namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char *f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

CheckResult timed(const std::string &name,
                  const std::function<std::pair<bool, std::string>()> &fn) {
    const auto t0 = Clock::now();
    CheckResult r{name, false, {}, 0.0};
    try {
        auto [ok, detail] = fn();
        r.passed = ok;
        r.detail = std::move(detail);
    } catch (const std::exception &e) {
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

std::pair<bool, std::string> kernel_vs_dense(bool typo) {
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> ang(-std::numbers::pi,
                                               std::numbers::pi);
    double worst = 0.0;
    constexpr int kCases = 400;
    for (int t = 0; t < kCases; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng() % 3);
        std::vector<std::size_t> wires(n);
        for (std::size_t k = 0; k < n; ++k) {
            wires[k] = k;
        }
        std::shuffle(wires.begin(), wires.end(), rng);
        const auto psi = oracle::random_state(n, rng);
        const auto axis = static_cast<qsim::Axis>(rng() % 3);
        const double a = ang(rng);
        const qsim::Gate1Q ref = oracle::rotation(axis, a);
        qsim::Gate1Q used = qsim::make_rotation(axis, a);
        if (typo) {
            used.m[1] = -used.m[1];
            used.m[2] += 0.25;
        }
        auto fast = psi;
        qsim::DenseMatrix dense(1);
        switch (t % 4) {
        case 0:
            qsim::apply_single(fast, used, wires[0]);
            dense = oracle::embed_single(n, ref, wires[0]);
            break;
        case 1:
            qsim::apply_controlled(fast, used, wires[0], wires[1]);
            dense = oracle::embed_controlled(n, ref, wires[0], wires[1]);
            break;
        case 2: {
            const qsim::Gate1Q other = oracle::u3(ang(rng), ang(rng), ang(rng));
            qsim::apply_two(fast, qsim::kron(other, used), wires[0], wires[1]);
            dense = oracle::embed_single(n, ref, wires[0]) *
                    oracle::embed_single(n, other, wires[1]);
            break;
        }
        default:
            if (n < 3) {
                qsim::apply_single(fast, used, wires[1]);
                dense = oracle::embed_single(n, ref, wires[1]);
            } else {
                qsim::apply_toffoli(fast, wires[0], wires[1], wires[2]);
                qsim::apply_single(fast, used, wires[2]);
                dense = oracle::embed_single(n, ref, wires[2]) *
                        oracle::embed_toffoli(n, wires[0], wires[1], wires[2]);
            }
        }
        worst = std::max(worst, oracle::max_abs_diff(
                                    fast, oracle::multiply(dense, psi)));
    }
    return {worst < 1e-12,
            fmt("%.0f cases, max amplitude diff %.3g", kCases, worst)};
}

std::pair<bool, std::string> shift_vs_fd() {
    const circuit::Qcnn q(circuit::QcnnConfig::for_qubits(8));
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ang(-std::numbers::pi,
                                               std::numbers::pi);
    std::uniform_real_distribution<double> lat(0.0, std::numbers::pi);
    double worst_fd = 0.0, worst_adj = 0.0;
    for (int trial = 0; trial < 2; ++trial) {
        circuit::QcnnParams p(q.config());
        for (auto &v : p.values()) {
            v = ang(rng);
        }
        std::vector<double> latent(q.config().latent_dim());
        for (auto &v : latent) {
            v = lat(rng);
        }
        circuit::Readout up{};
        for (auto &v : up) {
            v = ang(rng);
        }
        const auto s = grad::parameter_shift(q, latent, p, up);
        const auto f = grad::finite_difference(q, latent, p, up);
        const auto a = grad::adjoint(q, latent, p, up);
        for (std::size_t k = 0; k < s.d_params.size(); ++k) {
            worst_fd = std::max(worst_fd, oracle::relative_error(
                                              s.d_params[k], f.d_params[k], 1e-6));
            worst_adj = std::max(worst_adj, std::abs(s.d_params[k] - a.d_params[k]));
        }
        for (std::size_t k = 0; k < s.d_latent.size(); ++k) {
            worst_fd = std::max(worst_fd, oracle::relative_error(
                                              s.d_latent[k], f.d_latent[k], 1e-6));
            worst_adj = std::max(worst_adj, std::abs(s.d_latent[k] - a.d_latent[k]));
        }
    }
    return {worst_fd < 1e-4 && worst_adj < 1e-10,
            fmt("max rel err shift/FD %.3g, max |shift-adjoint| %.3g", worst_fd,
                worst_adj)};
}

std::pair<bool, std::string> sampler_stats() {
    // Imbalanced source, 1000 draws per class expected.
    std::vector<data::Label> labels;
    const std::array<std::size_t, 4> sizes{507, 371, 138, 228};
    for (std::size_t c = 0; c < 4; ++c) {
        labels.insert(labels.end(), sizes[c], static_cast<data::Label>(c));
    }
    const double sigma = std::sqrt(4000 * 0.25 * 0.75);
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto plan = data::SamplerPlan::inverse_frequency(labels, 1000, seed);
        const auto draws = data::weighted_sample(plan, labels);
        std::array<double, 4> n{};
        for (const auto i : draws) {
            n[data::index_of(labels[i])] += 1;
        }
        bool ok = draws.size() == 4000;
        for (const double c : n) {
            ok = ok && std::abs(c - 1000.0) <= 3 * sigma;
        }
        inside += ok ? 1 : 0;
    }
    const auto plan = data::SamplerPlan::inverse_frequency(labels, 10000, 4242);
    const auto draws = data::weighted_sample(plan, labels);
    std::array<double, 4> n{};
    for (const auto i : draws) {
        n[data::index_of(labels[i])] += 1;
    }
    double chi2 = 0.0;
    for (const double c : n) {
        chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
    }
    const double p = oracle::chi_square_sf3(chi2);
    return {inside >= 99 && p > 0.001,
            fmt("%.0f/100 trials within 3 sigma, chi-square p = %.3g", inside, p)};
}

std::pair<bool, std::string> codec_roundtrip() {
    std::mt19937_64 rng(5);
    std::normal_distribution<float> g(0.0f, 1.0f);
    data::FeatureSet set;
    set.dim = 2048;
    for (int r = 0; r < 3; ++r) {
        data::FeatureRecord rec;
        rec.id = "sample-" + std::to_string(r);
        rec.label = static_cast<data::Label>(r % 4);
        rec.values.resize(set.dim);
        for (auto &v : rec.values) {
            v = g(rng);
        }
        set.records.push_back(std::move(rec));
    }
    const auto bytes = data::encode_features(set);
    const bool same = data::decode_features(bytes) == set;
    bool truncation_rejected = false;
    try {
        (void)data::decode_features(
            std::span<const std::uint8_t>(bytes.data(), bytes.size() - 1));
    } catch (const std::exception &) {
        truncation_rejected = true;
    }
    return {same && truncation_rejected,
            std::string("round trip ") + (same ? "identical" : "DIFFERS") +
                ", truncation " + (truncation_rejected ? "rejected" : "ACCEPTED")};
}

} // namespace

std::vector<CheckResult> run(const Faults &faults) {
    std::vector<CheckResult> out;
    out.push_back(timed("kernel-vs-dense",
                        [&] { return kernel_vs_dense(faults.gate_typo); }));
    out.push_back(timed("shift-vs-finite-difference", shift_vs_fd));
    out.push_back(timed("sampler-statistics", sampler_stats));
    out.push_back(timed("codec-round-trip", codec_roundtrip));
    return out;
}

} // namespace qcnn::selftest
