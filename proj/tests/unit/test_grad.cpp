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

#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ld_oracle.hpp"
#include "qcnn/errors.hpp"
#include "qcnn/grad.hpp"
#include "qcnn/oracle.hpp"

using namespace qcnn;

namespace {

constexpr double kPi = std::numbers::pi;

struct Case {
    std::vector<double> latent;
    circuit::QcnnParams params;
    circuit::Readout upstream;
};

Case random_case(const circuit::Qcnn &q, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-kPi, kPi), l(0.0, kPi);
    Case c{std::vector<double>(q.config().latent_dim()),
           circuit::QcnnParams(q.config()), {}};
    for (auto &v : c.latent) {
        v = l(rng);
    }
    for (auto &v : c.params.values()) {
        v = u(rng);
    }
    for (auto &v : c.upstream) {
        v = u(rng);
    }
    return c;
}

} // namespace

TEST(grad, shift_matches_extended_finite_difference) {
    const circuit::Qcnn q(circuit::QcnnConfig::for_qubits(8));
    std::mt19937_64 rng(31);
    for (int t = 0; t < 3; ++t) {
        const auto c = random_case(q, rng);
        const auto s = grad::parameter_shift(q, c.latent, c.params, c.upstream);
        const auto a = q.angles(c.latent, c.params);
        const std::vector<std::size_t> wires(q.ancilla_wires().begin(),
                                             q.ancilla_wires().end());
        const auto f = qcnn::testing::ld_finite_difference(q.tape(), a, wires, c.upstream);
        for (std::size_t k = 0; k < s.d_params.size(); ++k) {
            EXPECT_LT(oracle::relative_error(s.d_params[k], f[k], 1e-6), 1e-6);
        }
        for (std::size_t k = 0; k < s.d_latent.size(); ++k) {
            EXPECT_LT(oracle::relative_error(s.d_latent[k],
                                             f[q.latent_offset() + k], 1e-6),
                      1e-6);
        }
    }
}

TEST(grad, adjoint_matches_shift) {
    for (const std::size_t n : {8u, 12u}) {
        const circuit::Qcnn q(circuit::QcnnConfig::for_qubits(n));
        std::mt19937_64 rng(32 + n);
        const auto c = random_case(q, rng);
        const auto s = grad::parameter_shift(q, c.latent, c.params, c.upstream);
        const auto a = grad::adjoint(q, c.latent, c.params, c.upstream);
        ASSERT_EQ(s.d_params.size(), a.d_params.size());
        for (std::size_t k = 0; k < s.d_params.size(); ++k) {
            EXPECT_NEAR(s.d_params[k], a.d_params[k], 1e-12);
        }
        for (std::size_t k = 0; k < s.d_latent.size(); ++k) {
            EXPECT_NEAR(s.d_latent[k], a.d_latent[k], 1e-12);
        }
    }
}

TEST(grad, double_finite_difference_agrees_loosely) {
    const circuit::Qcnn q(circuit::QcnnConfig::for_qubits(8));
    std::mt19937_64 rng(33);
    const auto c = random_case(q, rng);
    const auto s = grad::parameter_shift(q, c.latent, c.params, c.upstream);
    const auto f = grad::finite_difference(q, c.latent, c.params, c.upstream);
    for (std::size_t k = 0; k < s.d_params.size(); ++k) {
        EXPECT_NEAR(s.d_params[k], f.d_params[k], 1e-8);
    }
}

TEST(grad, outer_classifier_rotations_have_zero_gradient) {
    // <Z_a> after RZ.RY.RZ on the ancilla depends only on the RY angle.
    const circuit::Qcnn q(circuit::QcnnConfig::for_qubits(12));
    std::mt19937_64 rng(34);
    const auto c = random_case(q, rng);
    const auto a = grad::adjoint(q, c.latent, c.params, c.upstream);
    const std::size_t cls = q.layout().cls;
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(a.d_params[cls + 3 * k], 0.0, 1e-14);
        EXPECT_NEAR(a.d_params[cls + 3 * k + 2], 0.0, 1e-14);
        EXPECT_GT(std::abs(a.d_params[cls + 3 * k + 1]), 1e-6);
    }
}

TEST(grad, finite_difference_step_validated) {
    const circuit::Qcnn q(circuit::QcnnConfig::for_qubits(8));
    std::mt19937_64 rng(35);
    const auto c = random_case(q, rng);
    EXPECT_THROW(grad::finite_difference(q, c.latent, c.params, c.upstream, 0.0),
                 ConfigError);
    EXPECT_THROW(grad::finite_difference(q, c.latent, c.params, c.upstream, 0.1),
                 ConfigError);
}

TEST(grad, observable_evaluates_weighted_z) {
    qsim::Statevector s(2);
    qsim::apply_single(s, qsim::pauli_x(), 1);
    const grad::ZObservable obs{{{0, 2.0}, {1, 0.5}}};
    EXPECT_DOUBLE_EQ(obs.evaluate(s), 2.0 - 0.5);
}
