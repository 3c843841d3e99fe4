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

// Test-side oracles: an extended-precision gate-by-gate tape replay with its
// own closed-form matrices, and finite differences on top of it.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qcnn/tape.hpp"

namespace qcnn::testing {

using LComplex = std::complex<long double>;
using LGate = std::array<LComplex, 4>; // row-major 2x2

inline LGate ld_gate(const circuit::Op &op, std::span<const long double> a) {
    using circuit::GateKind;
    const LComplex i(0.0L, 1.0L);
    auto angle = [&](std::size_t slot) {
        return a[static_cast<std::size_t>(op.params[slot])];
    };
    switch (op.kind) {
    case GateKind::RX:
    case GateKind::CRX: {
        const long double t = angle(0) / 2;
        return {std::cos(t), -i * std::sin(t), -i * std::sin(t), std::cos(t)};
    }
    case GateKind::RY: {
        const long double t = angle(0) / 2;
        return {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)};
    }
    case GateKind::RZ:
    case GateKind::CRZ: {
        const long double t = angle(0) / 2;
        return {std::exp(-i * t), 0.0L, 0.0L, std::exp(i * t)};
    }
    case GateKind::U3: {
        const long double th = angle(0), ph = angle(1), la = angle(2);
        const LComplex g = std::exp(-i * ((ph + la) / 2));
        const long double c = std::cos(th / 2), s = std::sin(th / 2);
        return {g * c, -g * std::exp(i * la) * s, g * std::exp(i * ph) * s,
                g * std::exp(i * (ph + la)) * c};
    }
    default: // X, CNOT, Toffoli
        return {0.0L, 1.0L, 1.0L, 0.0L};
    }
}

/// Final state of `tape` from |0...0>, replayed op by op in long double.
inline std::vector<LComplex> ld_run(const circuit::Tape &tape,
                                    std::span<const long double> angles) {
    std::vector<LComplex> psi(std::size_t{1} << tape.n_qubits());
    psi[0] = 1.0L;
    for (const auto &op : tape.ops()) {
        const std::size_t nw = circuit::wire_count(op.kind);
        std::size_t ctrl = 0;
        for (std::size_t k = 0; k + 1 < nw; ++k) {
            ctrl |= std::size_t{1} << op.wires[k];
        }
        const std::size_t tb = std::size_t{1} << op.target();
        const LGate g = ld_gate(op, angles);
        for (std::size_t idx = 0; idx < psi.size(); ++idx) {
            if ((idx & tb) || (idx & ctrl) != ctrl) {
                continue;
            }
            const LComplex a0 = psi[idx], a1 = psi[idx | tb];
            psi[idx] = g[0] * a0 + g[1] * a1;
            psi[idx | tb] = g[2] * a0 + g[3] * a1;
        }
    }
    return psi;
}

/// sum_k weights[k] <Z_{wires[k]}>.
inline long double ld_observable(const std::vector<LComplex> &psi,
                                 std::span<const std::size_t> wires,
                                 std::span<const double> weights) {
    long double f = 0.0L;
    for (std::size_t k = 0; k < wires.size(); ++k) {
        const std::size_t b = std::size_t{1} << wires[k];
        long double z = 0.0L;
        for (std::size_t idx = 0; idx < psi.size(); ++idx) {
            z += (idx & b ? -1.0L : 1.0L) * std::norm(psi[idx]);
        }
        f += static_cast<long double>(weights[k]) * z;
    }
    return f;
}

/// Central differences with step `eps` for every angle of the tape.
inline std::vector<double>
ld_finite_difference(const circuit::Tape &tape, std::span<const double> angles,
                     std::span<const std::size_t> wires,
                     std::span<const double> weights, double eps = 1e-5) {
    std::vector<long double> a(angles.begin(), angles.end());
    std::vector<double> g(a.size(), 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        const long double orig = a[k];
        a[k] = orig + eps;
        const long double fp = ld_observable(ld_run(tape, a), wires, weights);
        a[k] = orig - eps;
        const long double fm = ld_observable(ld_run(tape, a), wires, weights);
        a[k] = orig;
        g[k] = static_cast<double>((fp - fm) / (2.0L * eps));
    }
    return g;
}

} // namespace qcnn::testing
