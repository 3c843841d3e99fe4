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
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ld_oracle.hpp"
#include "qcnn/circuit.hpp"
#include "qcnn/errors.hpp"
#include "qcnn/oracle.hpp"

using namespace qcnn;
using circuit::GateKind;
using circuit::WirePair;

namespace {

constexpr double kPi = std::numbers::pi;

qsim::Statevector swapped(const qsim::Statevector &s, std::size_t a,
                          std::size_t b) {
    std::vector<qsim::Complex> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const std::size_t ba = (i >> a) & 1, bb = (i >> b) & 1;
        std::size_t j = i & ~((std::size_t{1} << a) | (std::size_t{1} << b));
        j |= (ba << b) | (bb << a);
        out[j] = s[i];
    }
    return qsim::Statevector::from_amplitudes(std::move(out));
}

} // namespace

TEST(circuit, twelve_qubit_layout_is_30_2_30_12_12) {
    const auto cfg = circuit::QcnnConfig::for_qubits(12);
    EXPECT_EQ(cfg.n_data, 8u);
    EXPECT_EQ(cfg.latent_dim(), 8u);
    const auto l = circuit::ParamLayout::for_config(cfg);
    EXPECT_EQ(l.pool - l.conv1, 30u);
    EXPECT_EQ(l.conv2 - l.pool, 2u);
    EXPECT_EQ(l.inter2 - l.conv2, 30u);
    EXPECT_EQ(l.cls - l.inter2, 12u);
    EXPECT_EQ(l.total - l.cls, 12u);
    EXPECT_EQ(l.total, 86u);
}

TEST(circuit, eight_qubit_layout) {
    const circuit::Qcnn q(circuit::QcnnConfig::for_qubits(8));
    EXPECT_EQ(q.n_params(), 80u);
    EXPECT_EQ(q.config().latent_dim(), 4u);
    EXPECT_FALSE(q.warnings().empty());
}

TEST(circuit, unsupported_qubit_count_rejected) {
    EXPECT_THROW(circuit::QcnnConfig::for_qubits(10), ConfigError);
    EXPECT_THROW(circuit::QcnnConfig::for_qubits(4), ConfigError);
}

TEST(circuit, every_angle_is_used) {
    const circuit::Qcnn q(circuit::QcnnConfig::for_qubits(12));
    EXPECT_TRUE(q.warnings().empty());
    EXPECT_EQ(q.tape().n_angles(), 86u + 8u);
    for (std::size_t k = 0; k < q.tape().n_angles(); ++k) {
        EXPECT_GT(q.tape().occurrences(k), 0u) << "angle " << k;
    }
}

TEST(circuit, conv_pattern_ring_even_odd) {
    const std::vector<std::size_t> eight{0, 1, 2, 3, 4, 5, 6, 7};
    const std::vector<WirePair> want{{0, 7}, {0, 1}, {2, 3}, {4, 5},
                                     {6, 7}, {1, 2}, {3, 4}, {5, 6}};
    EXPECT_EQ(circuit::conv_pattern(eight), want);
    const std::vector<std::size_t> four{0, 2, 4, 6};
    const std::vector<WirePair> want4{{0, 6}, {0, 2}, {4, 6}, {2, 4}};
    EXPECT_EQ(circuit::conv_pattern(four), want4);
    const std::vector<std::size_t> two{0, 2};
    EXPECT_EQ(circuit::conv_pattern(two), (std::vector<WirePair>{{0, 2}}));
}

TEST(circuit, zero_angle_ansatz_is_swap) {
    std::mt19937_64 rng(21);
    const std::vector<double> zeros(15, 0.0);
    const auto psi = oracle::random_state(3, rng);
    auto s = psi;
    circuit::conv_ansatz(s, {0, 2}, zeros);
    EXPECT_LT(oracle::max_abs_diff(s, swapped(psi, 0, 2)), 1e-15);
}

TEST(circuit, ansatz_angle_count_checked) {
    qsim::Statevector s(2);
    const std::vector<double> short_params(14, 0.0);
    EXPECT_THROW(circuit::conv_ansatz(s, {0, 1}, short_params), ConfigError);
}

TEST(circuit, pooling_keeps_even_positions) {
    const auto cfg = circuit::QcnnConfig::for_qubits(12);
    circuit::Tape t(12, 2);
    const auto plan = circuit::append_pool_layer(t, circuit::initial_plan(cfg), 0);
    EXPECT_EQ(plan.active, (std::vector<std::size_t>{0, 2, 4, 6}));
    // CRZ, X, CRX per pair.
    EXPECT_EQ(t.ops().size(), 12u);
    EXPECT_EQ(t.ops()[0].kind, GateKind::CRZ);
    EXPECT_EQ(t.ops()[1].kind, GateKind::X);
    EXPECT_EQ(t.ops()[2].kind, GateKind::CRX);
    circuit::WirePlan odd;
    odd.active = {0, 1, 2};
    EXPECT_THROW(circuit::append_pool_layer(t, odd, 0), ConfigError);
}

TEST(circuit, cascade_needs_three_wires) {
    circuit::Tape t(4, 0);
    circuit::WirePlan two;
    two.active = {0, 2};
    EXPECT_FALSE(circuit::append_interaction_cascade(t, two));
    EXPECT_TRUE(t.ops().empty());
    circuit::WirePlan four;
    four.active = {0, 1, 2, 3};
    EXPECT_TRUE(circuit::append_interaction_cascade(t, four));
    EXPECT_EQ(t.ops().size(), 2u);
    EXPECT_EQ(t.ops()[0].kind, GateKind::Toffoli);
}

TEST(circuit, latent_range_checked) {
    EXPECT_THROW(circuit::LatentVector::from_angles({0.1, -0.01}), ConfigError);
    EXPECT_THROW(circuit::LatentVector::from_angles({kPi + 1e-9}), ConfigError);
    EXPECT_THROW(circuit::LatentVector::from_angles({std::nan("")}), ConfigError);
    EXPECT_NO_THROW(circuit::LatentVector::from_angles({0.0, kPi}));
}

TEST(circuit, forward_matches_extended_replay) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(-kPi, kPi), l(0.0, kPi);
    for (const std::size_t n : {8u, 12u}) {
        const circuit::Qcnn q(circuit::QcnnConfig::for_qubits(n));
        circuit::QcnnParams p(q.config());
        for (auto &v : p.values()) {
            v = u(rng);
        }
        std::vector<double> lat(q.config().latent_dim());
        for (auto &v : lat) {
            v = l(rng);
        }
        const auto r = q.forward(circuit::LatentVector::from_angles(lat), p);
        const auto a = q.angles(lat, p);
        const std::vector<long double> al(a.begin(), a.end());
        const auto psi = qcnn::testing::ld_run(q.tape(), al);
        for (std::size_t k = 0; k < 4; ++k) {
            const std::size_t w = q.ancilla_wires()[k];
            const double one = 1.0;
            const auto z = qcnn::testing::ld_observable(psi, {&w, 1}, {&one, 1});
            EXPECT_NEAR(r[k], static_cast<double>(z), 1e-13);
            EXPECT_LE(std::abs(r[k]), 1.0);
        }
    }
}

TEST(circuit, params_size_checked) {
    const auto cfg = circuit::QcnnConfig::for_qubits(12);
    EXPECT_THROW(circuit::QcnnParams(cfg, std::vector<double>(85, 0.0)),
                 ConfigError);
    const circuit::Qcnn q(cfg);
    const circuit::QcnnParams p(cfg);
    EXPECT_THROW((void)q.forward(circuit::LatentVector::from_angles({0.1, 0.2}), p),
                 ConfigError);
}

TEST(circuit, describe_names_layers) {
    const circuit::Qcnn q(circuit::QcnnConfig::for_qubits(12));
    const std::string d = q.describe();
    for (const char *label : {"@encode", "@conv1.pass0", "@conv1.pass1", "@pool",
                              "@inter1", "@conv2.pass0", "@inter2", "@cls"}) {
        EXPECT_NE(d.find(label), std::string::npos) << label;
    }
}
