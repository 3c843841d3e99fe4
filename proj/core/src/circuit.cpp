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

#include "qcnn/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qcnn/errors.hpp"

namespace qcnn::circuit {
namespace {

Op gate(GateKind kind, std::initializer_list<std::size_t> wires,
        std::initializer_list<std::size_t> params, const std::string &label) {
    Op op;
    op.kind = kind;
    std::size_t i = 0;
    for (const auto w : wires) {
        op.wires[i++] = w;
    }
    i = 0;
    for (const auto p : params) {
        op.params[i++] = static_cast<int>(p);
    }
    op.label = label;
    return op;
}

void require_count(std::span<const double> v, std::size_t n, const char *what) {
    if (v.size() != n) {
        throw ConfigError(std::string(what) + " expects " + std::to_string(n) +
                          " angles, got " + std::to_string(v.size()));
    }
}

void check_plan(const WirePlan &plan, std::size_t n_qubits) {
    for (const auto &[a, b] : plan.pairs) {
        if (a == b || a >= n_qubits || b >= n_qubits) {
            throw ConfigError("invalid wire pair in plan");
        }
        const auto in_active = [&](std::size_t w) {
            return std::find(plan.active.begin(), plan.active.end(), w) !=
                   plan.active.end();
        };
        if (!in_active(a) || !in_active(b)) {
            throw ConfigError("plan pair addresses an inactive wire");
        }
    }
}

/// Builds a literal-angle tape over the state's wires, runs it.
template <typename Fn>
void run_literal(qsim::Statevector &state, std::span<const double> angles,
                 Fn &&append) {
    Tape tape(state.n_qubits(), angles.size());
    append(tape);
    Program(std::move(tape)).run(state, angles);
}

Tape build_qcnn_tape(const QcnnConfig &cfg, const ParamLayout &layout,
                     std::vector<std::size_t> &ancillas,
                     std::vector<std::string> &warnings) {
    const std::size_t latent = layout.total;
    Tape tape(cfg.total_qubits(), layout.total + cfg.latent_dim());
    WirePlan plan = initial_plan(cfg);
    ancillas = plan.ancillas;

    append_angle_encode(tape, plan.active, latent);
    for (std::size_t p = 0; p < kConvPasses; ++p) {
        append_conv_layer(tape, plan, layout.conv1 + p * kAnsatzParams,
                          "conv1.pass" + std::to_string(p));
    }
    plan = append_pool_layer(tape, plan, layout.pool);
    if (!append_interaction_cascade(tape, plan, "inter1")) {
        warnings.push_back("interaction layer 1 skipped: " +
                           std::to_string(plan.active.size()) +
                           " active wires (< 3)");
    }
    for (std::size_t p = 0; p < kConvPasses; ++p) {
        append_conv_layer(tape, plan, layout.conv2 + p * kAnsatzParams,
                          "conv2.pass" + std::to_string(p));
    }
    if (plan.active.size() < 3) {
        warnings.push_back("interaction layer 2 cascades skipped: " +
                           std::to_string(plan.active.size()) +
                           " active wires (< 3); rotations kept");
    }
    append_interaction_param(tape, plan, layout.inter2);
    append_classifier_interaction(tape, plan, layout.cls);
    return tape;
}

} // namespace

QcnnConfig QcnnConfig::for_qubits(std::size_t total_qubits) {
    if (total_qubits != 8 && total_qubits != 12) {
        throw ConfigError("qubits must be 8 or 12, got " +
                          std::to_string(total_qubits));
    }
    return QcnnConfig{total_qubits - kNumAncilla, kNumAncilla};
}

void QcnnConfig::validate() const {
    if (n_data != 4 && n_data != 8) {
        throw ConfigError("n_data must be 4 or 8, got " +
                          std::to_string(n_data));
    }
    if (n_ancilla != kNumAncilla) {
        throw ConfigError("n_ancilla must be 4");
    }
}

ParamLayout ParamLayout::for_config(const QcnnConfig &cfg) {
    cfg.validate();
    ParamLayout l;
    l.conv1 = 0;
    l.pool = l.conv1 + kConvPasses * kAnsatzParams;
    l.conv2 = l.pool + 2;
    l.inter2 = l.conv2 + kConvPasses * kAnsatzParams;
    l.cls = l.inter2 + 3 * cfg.retained();
    l.total = l.cls + 3 * cfg.n_ancilla;
    return l;
}

QcnnParams::QcnnParams(const QcnnConfig &cfg)
    : cfg_(cfg), layout_(ParamLayout::for_config(cfg)),
      values_(layout_.total, 0.0) {}

QcnnParams::QcnnParams(const QcnnConfig &cfg, std::vector<double> values)
    : cfg_(cfg), layout_(ParamLayout::for_config(cfg)),
      values_(std::move(values)) {
    if (values_.size() != layout_.total) {
        throw ConfigError("expected " + std::to_string(layout_.total) +
                          " circuit parameters, got " +
                          std::to_string(values_.size()));
    }
    for (const double v : values_) {
        if (!std::isfinite(v)) {
            throw ConfigError("circuit parameter is not finite");
        }
    }
}

std::span<const double> QcnnParams::conv1(std::size_t pass) const {
    return std::span<const double>(values_).subspan(
        layout_.conv1 + pass * kAnsatzParams, kAnsatzParams);
}
std::span<const double> QcnnParams::pool() const {
    return std::span<const double>(values_).subspan(layout_.pool, 2);
}
std::span<const double> QcnnParams::conv2(std::size_t pass) const {
    return std::span<const double>(values_).subspan(
        layout_.conv2 + pass * kAnsatzParams, kAnsatzParams);
}
std::span<const double> QcnnParams::inter2() const {
    return std::span<const double>(values_).subspan(layout_.inter2,
                                                    layout_.cls - layout_.inter2);
}
std::span<const double> QcnnParams::cls() const {
    return std::span<const double>(values_).subspan(layout_.cls,
                                                    layout_.total - layout_.cls);
}

LatentVector LatentVector::from_angles(std::vector<double> angles) {
    for (const double a : angles) {
        if (!std::isfinite(a) || a < 0.0 || a > std::numbers::pi) {
            throw ConfigError("encoded angle outside [0, pi]");
        }
    }
    LatentVector v;
    v.angles_ = std::move(angles);
    return v;
}

std::vector<WirePair> conv_pattern(std::span<const std::size_t> active) {
    const std::size_t m = active.size();
    if (m < 2) {
        return {};
    }
    if (m == 2) {
        return {{active[0], active[1]}};
    }
    std::vector<WirePair> pairs{{active[0], active[m - 1]}};
    for (std::size_t i = 0; i + 1 < m; i += 2) {
        pairs.emplace_back(active[i], active[i + 1]);
    }
    for (std::size_t i = 1; i + 1 < m; i += 2) {
        pairs.emplace_back(active[i], active[i + 1]);
    }
    return pairs;
}

WirePlan initial_plan(const QcnnConfig &cfg) {
    cfg.validate();
    WirePlan plan;
    for (std::size_t w = 0; w < cfg.n_data; ++w) {
        plan.active.push_back(w);
    }
    for (std::size_t k = 0; k < cfg.n_ancilla; ++k) {
        plan.ancillas.push_back(cfg.n_data + k);
    }
    plan.pairs = conv_pattern(plan.active);
    return plan;
}

void append_angle_encode(Tape &tape, std::span<const std::size_t> wires,
                         std::size_t first_angle) {
    for (std::size_t j = 0; j < wires.size(); ++j) {
        tape.add(gate(GateKind::RY, {wires[j]}, {first_angle + j}, "encode"));
    }
}

void append_conv_ansatz(Tape &tape, WirePair pair, std::size_t p,
                        const std::string &label) {
    const auto [a, b] = pair;
    if (a == b) {
        throw ConfigError("conv ansatz needs two distinct wires");
    }
    tape.add(gate(GateKind::U3, {a}, {p + 0, p + 1, p + 2}, label));
    tape.add(gate(GateKind::U3, {b}, {p + 3, p + 4, p + 5}, label));
    tape.add(gate(GateKind::CNOT, {b, a}, {}, label));
    tape.add(gate(GateKind::RZ, {a}, {p + 6}, label));
    tape.add(gate(GateKind::RY, {b}, {p + 7}, label));
    tape.add(gate(GateKind::CNOT, {a, b}, {}, label));
    tape.add(gate(GateKind::RY, {b}, {p + 8}, label));
    tape.add(gate(GateKind::CNOT, {b, a}, {}, label));
    tape.add(gate(GateKind::U3, {a}, {p + 9, p + 10, p + 11}, label));
    tape.add(gate(GateKind::U3, {b}, {p + 12, p + 13, p + 14}, label));
}

void append_conv_layer(Tape &tape, const WirePlan &plan,
                       std::size_t first_angle, const std::string &label) {
    check_plan(plan, tape.n_qubits());
    for (const auto &pair : plan.pairs) {
        append_conv_ansatz(tape, pair, first_angle, label);
    }
}

WirePlan append_pool_layer(Tape &tape, const WirePlan &plan,
                           std::size_t first_angle) {
    const std::size_t m = plan.active.size();
    if (m == 0 || m % 2 != 0) {
        throw ConfigError("pooling needs an even number of active wires, got " +
                          std::to_string(m));
    }
    WirePlan next;
    next.ancillas = plan.ancillas;
    for (std::size_t i = 0; i < m; i += 2) {
        const std::size_t keep = plan.active[i];
        const std::size_t drop = plan.active[i + 1];
        tape.add(gate(GateKind::CRZ, {drop, keep}, {first_angle}, "pool"));
        tape.add(gate(GateKind::X, {drop}, {}, "pool"));
        tape.add(gate(GateKind::CRX, {drop, keep}, {first_angle + 1}, "pool"));
        next.active.push_back(keep);
    }
    next.pairs = conv_pattern(next.active);
    return next;
}

bool append_interaction_cascade(Tape &tape, const WirePlan &plan,
                                const std::string &label) {
    const auto &w = plan.active;
    if (w.size() < 3) {
        return false;
    }
    for (std::size_t i = 0; i + 2 < w.size(); ++i) {
        tape.add(gate(GateKind::Toffoli, {w[i], w[i + 1], w[i + 2]}, {}, label));
    }
    return true;
}

void append_interaction_param(Tape &tape, const WirePlan &plan,
                              std::size_t first_angle) {
    const std::size_t m = plan.active.size();
    constexpr std::array<GateKind, 3> kinds{GateKind::RX, GateKind::RY,
                                            GateKind::RZ};
    for (std::size_t r = 0; r < 3; ++r) {
        append_interaction_cascade(tape, plan, "inter2");
        for (std::size_t j = 0; j < m; ++j) {
            tape.add(gate(kinds[r], {plan.active[j]}, {first_angle + r * m + j},
                          "inter2"));
        }
    }
}

void append_classifier_interaction(Tape &tape, const WirePlan &plan,
                                   std::size_t first_angle) {
    const auto &w = plan.active;
    const std::size_t m = w.size();
    if (m == 0) {
        throw ConfigError("classifier interaction needs active data wires");
    }
    if (m >= 2) {
        tape.add(gate(GateKind::CNOT, {w[m - 1], w[0]}, {}, "cls"));
        for (std::size_t i = 0; i + 1 < m; ++i) {
            tape.add(gate(GateKind::CNOT, {w[i], w[i + 1]}, {}, "cls"));
        }
    }
    for (std::size_t k = 0; k < plan.ancillas.size(); ++k) {
        const std::size_t a = plan.ancillas[k];
        const std::size_t p = first_angle + 3 * k;
        tape.add(gate(GateKind::CNOT, {w[k % m], a}, {}, "cls"));
        tape.add(gate(GateKind::RZ, {a}, {p}, "cls"));
        tape.add(gate(GateKind::RY, {a}, {p + 1}, "cls"));
        tape.add(gate(GateKind::RZ, {a}, {p + 2}, "cls"));
    }
}

void angle_encode(qsim::Statevector &state, const LatentVector &latent) {
    const std::size_t n = latent.size();
    if (n == 0 || n > state.n_qubits()) {
        throw ConfigError("latent length does not fit the register");
    }
    std::vector<std::size_t> wires(n);
    for (std::size_t j = 0; j < n; ++j) {
        wires[j] = j;
    }
    run_literal(state, latent.angles(),
                [&](Tape &t) { append_angle_encode(t, wires, 0); });
}

void conv_ansatz(qsim::Statevector &state, WirePair pair,
                 std::span<const double> params15) {
    require_count(params15, kAnsatzParams, "conv ansatz");
    run_literal(state, params15,
                [&](Tape &t) { append_conv_ansatz(t, pair, 0); });
}

void conv_layer(qsim::Statevector &state, const WirePlan &plan,
                std::span<const double> params15) {
    require_count(params15, kAnsatzParams, "conv layer");
    run_literal(state, params15,
                [&](Tape &t) { append_conv_layer(t, plan, 0); });
}

WirePlan pool_layer(qsim::Statevector &state, const WirePlan &plan,
                    std::span<const double> params2) {
    require_count(params2, 2, "pooling");
    WirePlan next;
    run_literal(state, params2,
                [&](Tape &t) { next = append_pool_layer(t, plan, 0); });
    return next;
}

void interaction_cascade(qsim::Statevector &state, const WirePlan &plan) {
    run_literal(state, {},
                [&](Tape &t) { append_interaction_cascade(t, plan); });
}

void interaction_param(qsim::Statevector &state, const WirePlan &plan,
                       std::span<const double> angles) {
    require_count(angles, 3 * plan.active.size(), "interaction layer");
    run_literal(state, angles,
                [&](Tape &t) { append_interaction_param(t, plan, 0); });
}

void classifier_interaction(qsim::Statevector &state, const WirePlan &plan,
                            std::span<const double> beta) {
    require_count(beta, 3 * plan.ancillas.size(), "classifier interaction");
    if (plan.ancillas.size() != kNumAncilla) {
        throw ConfigError("classifier interaction needs 4 ancillas");
    }
    run_literal(state, beta,
                [&](Tape &t) { append_classifier_interaction(t, plan, 0); });
}

Qcnn::Qcnn(const QcnnConfig &cfg)
    : cfg_(cfg), layout_(ParamLayout::for_config(cfg)),
      program_(build_qcnn_tape(cfg_, layout_, ancillas_, warnings_)) {}

std::vector<double> Qcnn::angles(std::span<const double> latent,
                                 const QcnnParams &params) const {
    check(latent, params);
    std::vector<double> a(params.values().begin(), params.values().end());
    a.insert(a.end(), latent.begin(), latent.end());
    return a;
}

void Qcnn::check(std::span<const double> latent,
                 const QcnnParams &params) const {
    if (!(params.config() == cfg_)) {
        throw ConfigError("parameter set built for a different configuration");
    }
    if (latent.size() != cfg_.latent_dim()) {
        throw ConfigError("latent length " + std::to_string(latent.size()) +
                          " != " + std::to_string(cfg_.latent_dim()));
    }
    for (const double z : latent) {
        if (!std::isfinite(z)) {
            throw ConfigError("latent angle is not finite");
        }
    }
}

qsim::Statevector Qcnn::run(std::span<const double> latent,
                            const QcnnParams &params) const {
    const auto a = angles(latent, params);
    qsim::Statevector state(cfg_.total_qubits());
    program_.run(state, a);
    return state;
}

Readout Qcnn::readout(const qsim::Statevector &state) const {
    Readout r{};
    for (std::size_t k = 0; k < kNumAncilla; ++k) {
        r[k] = qsim::expectation_z(state, ancillas_[k]);
    }
    return r;
}

Readout Qcnn::forward(const LatentVector &latent,
                      const QcnnParams &params) const {
    return readout(run(latent.angles(), params));
}

std::string Qcnn::describe() const {
    std::ostringstream os;
    os << "# qcnn circuit: data=" << cfg_.n_data
       << " ancilla=" << cfg_.n_ancilla << " qubits=" << cfg_.total_qubits()
       << "\n";
    os << "# angles a0..a" << layout_.total - 1 << " are circuit parameters"
       << " (conv1 " << layout_.conv1 << ", pool " << layout_.pool
       << ", conv2 " << layout_.conv2 << ", inter2 " << layout_.inter2
       << ", cls " << layout_.cls << "); a" << layout_.total << "..a"
       << layout_.total + cfg_.latent_dim() - 1 << " are encoding angles\n";
    os << "# readout: <Z> on";
    for (const auto a : ancillas_) {
        os << " q" << a;
    }
    os << "\n";
    for (const auto &w : warnings_) {
        os << "# warning: " << w << "\n";
    }
    os << tape().dump();
    return os.str();
}

Readout forward(const LatentVector &latent, const QcnnParams &params,
                const QcnnConfig &cfg) {
    return Qcnn(cfg).forward(latent, params);
}

} // namespace qcnn::circuit
