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

#include "qcnn/grad.hpp"

#include <cmath>
#include <numbers>

#include "qcnn/errors.hpp"

namespace qcnn::grad {
namespace {

using circuit::AngleShift;
using circuit::Block;
using circuit::GateKind;
using circuit::Program;

constexpr double kHalfPi = std::numbers::pi / 2;

// Four-term rule for controlled rotations (generator spectrum {0, +-1/2}).
const double kC1 = (std::numbers::sqrt2 + 1.0) / (4.0 * std::numbers::sqrt2);
const double kC2 = (std::numbers::sqrt2 - 1.0) / (4.0 * std::numbers::sqrt2);

double eval_shifted(const Program &program, std::span<const double> angles,
                    const ZObservable &obs, const AngleShift &shift) {
    qsim::Statevector state(program.tape().n_qubits());
    program.run(state, angles, &shift);
    return obs.evaluate(state);
}

double eval_at(const Program &program, std::span<const double> angles,
               const ZObservable &obs) {
    qsim::Statevector state(program.tape().n_qubits());
    program.run(state, angles);
    return obs.evaluate(state);
}

GradientVector split(const circuit::Qcnn &qcnn, const std::vector<double> &g) {
    GradientVector out;
    const auto off = static_cast<std::ptrdiff_t>(qcnn.latent_offset());
    out.d_params.assign(g.begin(), g.begin() + off);
    out.d_latent.assign(g.begin() + off, g.end());
    return out;
}

} // namespace

double ZObservable::evaluate(const qsim::Statevector &state) const {
    double f = 0.0;
    for (const auto &[wire, weight] : terms) {
        if (weight != 0.0) {
            f += weight * qsim::expectation_z(state, wire);
        }
    }
    return f;
}

std::vector<double> shift_gradient(const Program &program,
                                   std::span<const double> angles,
                                   const ZObservable &obs) {
    const auto &ops = program.tape().ops();
    std::vector<double> g(program.tape().n_angles(), 0.0);
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const auto &op = ops[i];
        for (std::size_t s = 0; s < circuit::param_count(op.kind); ++s) {
            auto f = [&](double delta) {
                return eval_shifted(program, angles, obs, {i, s, delta});
            };
            double d = 0.0;
            if (op.kind == GateKind::CRX || op.kind == GateKind::CRZ) {
                d = kC1 * (f(kHalfPi) - f(-kHalfPi)) -
                    kC2 * (f(3 * kHalfPi) - f(-3 * kHalfPi));
            } else {
                d = 0.5 * (f(kHalfPi) - f(-kHalfPi));
            }
            g[static_cast<std::size_t>(op.params[s])] += d;
        }
    }
    return g;
}

std::vector<double> finite_difference_gradient(const Program &program,
                                               std::span<const double> angles,
                                               const ZObservable &obs,
                                               double eps) {
    if (!(eps > 0.0 && eps <= 1e-2)) {
        throw ConfigError("finite-difference step must lie in (0, 1e-2]");
    }
    std::vector<double> a(angles.begin(), angles.end());
    std::vector<double> g(a.size(), 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (program.tape().occurrences(k) == 0) {
            continue;
        }
        const double orig = a[k];
        a[k] = orig + eps;
        const double fp = eval_at(program, a, obs);
        a[k] = orig - eps;
        const double fm = eval_at(program, a, obs);
        a[k] = orig;
        g[k] = (fp - fm) / (2.0 * eps);
    }
    return g;
}

std::vector<double> adjoint_gradient(const Program &program,
                                     std::span<const double> angles,
                                     const ZObservable &obs,
                                     const qsim::Statevector *final_state) {
    const auto &tape = program.tape();
    std::vector<double> g(tape.n_angles(), 0.0);

    qsim::Statevector psi =
        final_state ? *final_state : qsim::Statevector(tape.n_qubits());
    if (!final_state) {
        program.run(psi, angles);
    } else if (psi.n_qubits() != tape.n_qubits()) {
        throw ConfigError("final state does not match the program");
    }

    // lambda = O psi, O diagonal in the computational basis.
    qsim::Statevector lambda = psi;
    {
        auto amps = lambda.amplitudes();
        for (std::size_t i = 0; i < amps.size(); ++i) {
            double o = 0.0;
            for (const auto &[wire, weight] : obs.terms) {
                o += ((i >> wire) & 1) ? -weight : weight;
            }
            amps[i] *= o;
        }
    }

    const auto &blocks = program.blocks();
    const auto &ops = tape.ops();
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        const Block &b = *it;
        switch (b.kind) {
        case Block::Kind::Toffoli: {
            const auto &w = ops[b.first].wires;
            qsim::apply_toffoli(psi, w[0], w[1], w[2]);
            qsim::apply_toffoli(lambda, w[0], w[1], w[2]);
            break;
        }
        case Block::Kind::One: {
            const auto inv = program.block_matrix1(b, angles).adjoint();
            qsim::apply_single(psi, inv, b.w0);
            const auto occ = program.occurrences(b);
            if (!occ.empty()) {
                const auto r = qsim::reduced_overlap(lambda, psi, b.w0);
                const auto ds = program.block_derivatives1(b, angles);
                for (std::size_t k = 0; k < occ.size(); ++k) {
                    qsim::Complex s{0.0, 0.0};
                    for (std::size_t e = 0; e < 4; ++e) {
                        s += ds[k].m[e] * r.m[e];
                    }
                    g[occ[k].angle] += 2.0 * s.real();
                }
            }
            qsim::apply_single(lambda, inv, b.w0);
            break;
        }
        case Block::Kind::Two: {
            const auto inv = program.block_matrix2(b, angles).adjoint();
            qsim::apply_two(psi, inv, b.w0, b.w1);
            const auto occ = program.occurrences(b);
            if (!occ.empty()) {
                const auto r = qsim::reduced_overlap(lambda, psi, b.w0, b.w1);
                const auto ds = program.block_derivatives2(b, angles);
                for (std::size_t k = 0; k < occ.size(); ++k) {
                    qsim::Complex s{0.0, 0.0};
                    for (std::size_t e = 0; e < 16; ++e) {
                        s += ds[k].m[e] * r.m[e];
                    }
                    g[occ[k].angle] += 2.0 * s.real();
                }
            }
            qsim::apply_two(lambda, inv, b.w0, b.w1);
            break;
        }
        }
    }
    return g;
}

ZObservable readout_observable(const circuit::Qcnn &qcnn,
                               const circuit::Readout &upstream) {
    ZObservable obs;
    const auto anc = qcnn.ancilla_wires();
    for (std::size_t k = 0; k < upstream.size(); ++k) {
        obs.terms.emplace_back(anc[k], upstream[k]);
    }
    return obs;
}

GradientVector parameter_shift(const circuit::Qcnn &qcnn,
                               std::span<const double> latent,
                               const circuit::QcnnParams &params,
                               const circuit::Readout &upstream) {
    const auto a = qcnn.angles(latent, params);
    return split(qcnn, shift_gradient(qcnn.program(), a,
                                      readout_observable(qcnn, upstream)));
}

GradientVector finite_difference(const circuit::Qcnn &qcnn,
                                 std::span<const double> latent,
                                 const circuit::QcnnParams &params,
                                 const circuit::Readout &upstream,
                                 double eps) {
    const auto a = qcnn.angles(latent, params);
    return split(qcnn,
                 finite_difference_gradient(
                     qcnn.program(), a, readout_observable(qcnn, upstream), eps));
}

GradientVector adjoint(const circuit::Qcnn &qcnn,
                       std::span<const double> latent,
                       const circuit::QcnnParams &params,
                       const circuit::Readout &upstream,
                       const qsim::Statevector *final_state) {
    const auto a = qcnn.angles(latent, params);
    return split(qcnn, adjoint_gradient(qcnn.program(), a,
                                        readout_observable(qcnn, upstream),
                                        final_state));
}

} // namespace qcnn::grad
