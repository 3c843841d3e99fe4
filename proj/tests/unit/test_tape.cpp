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
#include "qcnn/oracle.hpp"
#include "qcnn/tape.hpp"

using namespace qcnn;
using circuit::GateKind;
using circuit::Op;
using circuit::Tape;

namespace {

Op op(GateKind k, std::array<std::size_t, 3> w, std::array<int, 3> p = {-1, -1, -1}) {
    Op o;
    o.kind = k;
    o.wires = w;
    o.params = p;
    return o;
}

Tape mixed_tape() {
    Tape t(4, 6);
    t.add(op(GateKind::RY, {2}, {0}));
    t.add(op(GateKind::U3, {0}, {1, 2, 3}));
    t.add(op(GateKind::CNOT, {0, 1}));
    t.add(op(GateKind::CRZ, {1, 0}, {4}));
    t.add(op(GateKind::X, {3}));
    t.add(op(GateKind::Toffoli, {0, 1, 3}));
    t.add(op(GateKind::CRX, {3, 2}, {5}));
    t.add(op(GateKind::RX, {1}, {4}));
    t.add(op(GateKind::RZ, {2}, {0}));
    return t;
}

std::vector<double> random_angles(std::size_t n, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    std::vector<double> a(n);
    for (auto &v : a) {
        v = u(rng);
    }
    return a;
}

} // namespace

TEST(tape, add_validates_wires_and_angles) {
    Tape t(3, 2);
    EXPECT_THROW(t.add(op(GateKind::RX, {3}, {0})), ConfigError);
    EXPECT_THROW(t.add(op(GateKind::RX, {0}, {2})), ConfigError);
    EXPECT_THROW(t.add(op(GateKind::CNOT, {1, 1})), ConfigError);
    EXPECT_THROW(t.add(op(GateKind::RX, {0})), ConfigError);
    EXPECT_NO_THROW(t.add(op(GateKind::CRZ, {0, 2}, {1})));
}

TEST(tape, occurrences_count_shared_angles) {
    const Tape t = mixed_tape();
    EXPECT_EQ(t.occurrences(0), 2u);
    EXPECT_EQ(t.occurrences(4), 2u);
    EXPECT_EQ(t.occurrences(5), 1u);
}

TEST(tape, dump_parse_round_trip) {
    const Tape t = mixed_tape();
    const Tape back = Tape::parse(t.dump());
    EXPECT_EQ(back.dump(), t.dump());
    EXPECT_EQ(back.ops().size(), t.ops().size());
}

TEST(tape, parse_rejects_garbage) {
    EXPECT_THROW(Tape::parse("qubits 2\nangles 1\nFOO q0\n"), FormatError);
    EXPECT_THROW(Tape::parse("qubits 2\nangles 1\nRX q5 a0\n"), std::exception);
}

TEST(tape, fused_program_matches_unfused_and_extended_replay) {
    std::mt19937_64 rng(11);
    const Tape t = mixed_tape();
    const circuit::Program prog(t);
    EXPECT_LT(prog.blocks().size(), t.ops().size());
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_angles(t.n_angles(), rng);
        qsim::Statevector fused(4), plain(4);
        prog.run(fused, a);
        circuit::run_unfused(t, plain, a);
        EXPECT_LT(oracle::max_abs_diff(fused, plain), 1e-14);
        const std::vector<long double> al(a.begin(), a.end());
        const auto ref = qcnn::testing::ld_run(t, al);
        for (std::size_t i = 0; i < ref.size(); ++i) {
            EXPECT_NEAR(fused[i].real(), static_cast<double>(ref[i].real()), 1e-14);
            EXPECT_NEAR(fused[i].imag(), static_cast<double>(ref[i].imag()), 1e-14);
        }
    }
}

TEST(tape, target_derivative_matches_finite_difference) {
    std::mt19937_64 rng(12);
    const Tape t = mixed_tape();
    auto a = random_angles(t.n_angles(), rng);
    for (const auto &o : t.ops()) {
        for (std::size_t slot = 0; slot < circuit::param_count(o.kind); ++slot) {
            const auto idx = static_cast<std::size_t>(o.params[slot]);
            const auto d = circuit::target_derivative(o, slot, a);
            const double orig = a[idx];
            const double h = 1e-6;
            a[idx] = orig + h;
            const auto gp = circuit::target_matrix(o, 0, a);
            a[idx] = orig - h;
            const auto gm = circuit::target_matrix(o, 0, a);
            a[idx] = orig;
            for (std::size_t k = 0; k < 4; ++k) {
                const auto fd = (gp.m[k] - gm.m[k]) / (2 * h);
                EXPECT_LT(std::abs(fd - d.m[k]), 1e-8)
                    << circuit::gate_name(o.kind) << " slot " << slot;
            }
        }
    }
}

TEST(tape, angle_shift_touches_one_occurrence) {
    const Tape t = mixed_tape();
    const circuit::Program prog(t);
    std::vector<double> a(t.n_angles(), 0.2);
    // Angle 0 drives op 0 (RY) and op 8 (RZ); shifting op 0 only equals a
    // tape where op 0 reads a modified copy of angle 0.
    const circuit::AngleShift sh{0, 0, 0.5};
    qsim::Statevector shifted(4);
    prog.run(shifted, a, &sh);
    Tape t2(4, 7);
    for (std::size_t i = 0; i < t.ops().size(); ++i) {
        Op o = t.ops()[i];
        if (i == 0) {
            o.params[0] = 6;
        }
        t2.add(o);
    }
    auto a2 = a;
    a2.push_back(0.7);
    qsim::Statevector ref(4);
    circuit::run_unfused(t2, ref, a2);
    EXPECT_LT(oracle::max_abs_diff(shifted, ref), 1e-14);
}
