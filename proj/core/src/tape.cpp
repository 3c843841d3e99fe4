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

#include "qcnn/tape.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "qcnn/errors.hpp"

namespace qcnn::circuit {
namespace {

using qsim::Axis;
using qsim::Complex;
using qsim::Gate1Q;
using qsim::Gate2Q;
using namespace std::complex_literals;

constexpr double kHalfPi = 1.5707963267948966;

struct GateInfo {
    GateKind kind;
    std::string_view name;
    std::size_t wires;
    std::size_t params;
};

constexpr std::array<GateInfo, 9> kGates{{
    {GateKind::RX, "RX", 1, 1},
    {GateKind::RY, "RY", 1, 1},
    {GateKind::RZ, "RZ", 1, 1},
    {GateKind::U3, "U3", 1, 3},
    {GateKind::X, "X", 1, 0},
    {GateKind::CNOT, "CNOT", 2, 0},
    {GateKind::CRX, "CRX", 2, 1},
    {GateKind::CRZ, "CRZ", 2, 1},
    {GateKind::Toffoli, "TOFFOLI", 3, 0},
}};

const GateInfo &info(GateKind kind) {
    return kGates[static_cast<std::size_t>(kind)];
}

double angle_of(const Op &op, std::size_t op_index, std::size_t slot,
                std::span<const double> angles, const AngleShift *shift) {
    double a = angles[static_cast<std::size_t>(op.params[slot])];
    if (shift != nullptr && shift->op == op_index && shift->slot == slot) {
        a += shift->delta;
    }
    return a;
}

Gate1Q scaled(const Gate1Q &g, Complex s) {
    Gate1Q r = g;
    for (auto &v : r.m) {
        v *= s;
    }
    return r;
}

/// (-i/2) P
Gate1Q half_generator(Axis axis) { return scaled(qsim::pauli(axis), -0.5i); }

/// Embeds a single op into the (w0, w1) block basis. With `derivative` set,
/// the control-off subspace of a controlled gate is zero rather than I.
Gate2Q embed(const Op &op, const Gate1Q &g, bool derivative, std::size_t w0) {
    if (wire_count(op.kind) == 1) {
        return op.wires[0] == w0 ? qsim::kron(qsim::identity_gate(), g)
                                 : qsim::kron(g, qsim::identity_gate());
    }
    const std::size_t cb = (op.wires[0] == w0) ? 0 : 1;
    const std::size_t tb = 1 - cb;
    Gate2Q m;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const std::size_t ci = (i >> cb) & 1;
            if (ci != ((j >> cb) & 1)) {
                continue;
            }
            const std::size_t ti = (i >> tb) & 1;
            const std::size_t tj = (j >> tb) & 1;
            if (ci == 0) {
                m(i, j) = (!derivative && ti == tj) ? 1.0 : 0.0;
            } else {
                m(i, j) = g(ti, tj);
            }
        }
    }
    return m;
}

Gate2Q identity2() { return qsim::kron(qsim::identity_gate(), qsim::identity_gate()); }

std::size_t parse_index(std::string_view tok, char prefix, std::size_t line) {
    if (tok.size() < 2 || tok[0] != prefix) {
        throw FormatError("line " + std::to_string(line) + ": expected '" +
                              std::string(1, prefix) + "<n>', got '" +
                              std::string(tok) + "'",
                          0);
    }
    std::size_t v = 0;
    const auto *first = tok.data() + 1;
    const auto *last = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw FormatError("line " + std::to_string(line) + ": bad index '" +
                              std::string(tok) + "'",
                          0);
    }
    return v;
}

} // namespace

std::string_view gate_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> parse_gate_name(std::string_view name) {
    for (const auto &g : kGates) {
        if (g.name == name) {
            return g.kind;
        }
    }
    return std::nullopt;
}

std::size_t wire_count(GateKind kind) { return info(kind).wires; }
std::size_t param_count(GateKind kind) { return info(kind).params; }

bool is_controlled(GateKind kind) {
    return kind == GateKind::CNOT || kind == GateKind::CRX ||
           kind == GateKind::CRZ;
}

Tape::Tape(std::size_t n_qubits, std::size_t n_angles)
    : n_qubits_(n_qubits), n_angles_(n_angles) {
    if (n_qubits < 1 || n_qubits > qsim::kMaxQubits) {
        throw ConfigError("tape qubit count out of range");
    }
}

void Tape::add(Op op) {
    const std::size_t nw = wire_count(op.kind);
    for (std::size_t i = 0; i < nw; ++i) {
        if (op.wires[i] >= n_qubits_) {
            throw ConfigError("wire q" + std::to_string(op.wires[i]) +
                              " out of range in " +
                              std::string(gate_name(op.kind)));
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (op.wires[i] == op.wires[j]) {
                throw ConfigError("repeated wire in " +
                                  std::string(gate_name(op.kind)));
            }
        }
    }
    const std::size_t np = param_count(op.kind);
    for (std::size_t s = 0; s < 3; ++s) {
        if (s < np) {
            if (op.params[s] < 0 ||
                static_cast<std::size_t>(op.params[s]) >= n_angles_) {
                throw ConfigError("angle index out of range in " +
                                  std::string(gate_name(op.kind)));
            }
        } else {
            op.params[s] = kNoParam;
        }
    }
    ops_.push_back(std::move(op));
}

std::size_t Tape::occurrences(std::size_t index) const {
    std::size_t n = 0;
    for (const auto &op : ops_) {
        for (std::size_t s = 0; s < param_count(op.kind); ++s) {
            n += static_cast<std::size_t>(op.params[s]) == index;
        }
    }
    return n;
}

std::string Tape::dump() const {
    std::ostringstream os;
    os << "qubits " << n_qubits_ << "\n";
    os << "angles " << n_angles_ << "\n";
    for (const auto &op : ops_) {
        os << gate_name(op.kind);
        for (std::size_t i = 0; i < wire_count(op.kind); ++i) {
            os << " q" << op.wires[i];
        }
        for (std::size_t s = 0; s < param_count(op.kind); ++s) {
            os << " a" << op.params[s];
        }
        if (!op.label.empty()) {
            os << " @" << op.label;
        }
        os << "\n";
    }
    return os.str();
}

Tape Tape::parse(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::optional<std::size_t> qubits;
    std::optional<std::size_t> n_angles;
    std::optional<Tape> tape;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) {
            toks.push_back(t);
        }
        if (toks.empty()) {
            continue;
        }
        if (toks[0] == "qubits" || toks[0] == "angles") {
            if (toks.size() != 2) {
                throw FormatError("line " + std::to_string(lineno) +
                                      ": malformed header",
                                  0);
            }
            const std::size_t v = std::stoul(toks[1]);
            (toks[0] == "qubits" ? qubits : n_angles) = v;
            continue;
        }
        if (!qubits || !n_angles) {
            throw FormatError("gate before 'qubits'/'angles' header", 0);
        }
        if (!tape) {
            tape.emplace(*qubits, *n_angles);
        }
        const auto kind = parse_gate_name(toks[0]);
        if (!kind) {
            throw FormatError("line " + std::to_string(lineno) +
                                  ": unknown gate '" + toks[0] + "'",
                              0);
        }
        Op op;
        op.kind = *kind;
        const std::size_t nw = wire_count(*kind);
        const std::size_t np = param_count(*kind);
        std::size_t t = 1;
        if (toks.size() < 1 + nw + np) {
            throw FormatError("line " + std::to_string(lineno) +
                                  ": too few operands",
                              0);
        }
        for (std::size_t i = 0; i < nw; ++i) {
            op.wires[i] = parse_index(toks[t++], 'q', lineno);
        }
        for (std::size_t s = 0; s < np; ++s) {
            op.params[s] =
                static_cast<int>(parse_index(toks[t++], 'a', lineno));
        }
        if (t < toks.size()) {
            if (toks[t][0] != '@' || t + 1 != toks.size()) {
                throw FormatError("line " + std::to_string(lineno) +
                                      ": trailing tokens",
                                  0);
            }
            op.label = toks[t].substr(1);
        }
        tape->add(std::move(op));
    }
    if (!tape) {
        if (!qubits || !n_angles) {
            throw FormatError("missing 'qubits'/'angles' header", 0);
        }
        tape.emplace(*qubits, *n_angles);
    }
    return std::move(*tape);
}

Gate1Q target_matrix(const Op &op, std::size_t op_index,
                     std::span<const double> angles, const AngleShift *shift) {
    auto a = [&](std::size_t slot) {
        return angle_of(op, op_index, slot, angles, shift);
    };
    switch (op.kind) {
    case GateKind::RX:
    case GateKind::CRX:
        return qsim::make_rotation(Axis::X, a(0));
    case GateKind::RY:
        return qsim::make_rotation(Axis::Y, a(0));
    case GateKind::RZ:
    case GateKind::CRZ:
        return qsim::make_rotation(Axis::Z, a(0));
    case GateKind::U3:
        return qsim::make_u3(a(0), a(1), a(2));
    case GateKind::X:
    case GateKind::CNOT:
    case GateKind::Toffoli:
        return qsim::pauli_x();
    }
    return qsim::identity_gate();
}

Gate1Q target_derivative(const Op &op, std::size_t slot,
                         std::span<const double> angles) {
    auto a = [&](std::size_t s) {
        return angles[static_cast<std::size_t>(op.params[s])];
    };
    switch (op.kind) {
    case GateKind::RX:
    case GateKind::CRX:
        return half_generator(Axis::X) * qsim::make_rotation(Axis::X, a(0));
    case GateKind::RY:
        return half_generator(Axis::Y) * qsim::make_rotation(Axis::Y, a(0));
    case GateKind::RZ:
    case GateKind::CRZ:
        return half_generator(Axis::Z) * qsim::make_rotation(Axis::Z, a(0));
    case GateKind::U3: {
        const Gate1Q rz_theta = qsim::make_rotation(Axis::Z, a(0));
        const Gate1Q rz_phi = qsim::make_rotation(Axis::Z, a(1));
        const Gate1Q rz_lam = qsim::make_rotation(Axis::Z, a(2));
        const Gate1Q rx_m = qsim::make_rotation(Axis::X, -kHalfPi);
        const Gate1Q rx_p = qsim::make_rotation(Axis::X, kHalfPi);
        const Gate1Q dz = half_generator(Axis::Z);
        switch (slot) {
        case 0:
            return rz_phi * rx_m * (dz * rz_theta) * rx_p * rz_lam;
        case 1:
            return (dz * rz_phi) * rx_m * rz_theta * rx_p * rz_lam;
        default:
            return rz_phi * rx_m * rz_theta * rx_p * (dz * rz_lam);
        }
    }
    default:
        throw UsageError("derivative requested for unparameterized gate");
    }
}

void run_unfused(const Tape &tape, qsim::Statevector &state,
                 std::span<const double> angles) {
    if (state.n_qubits() != tape.n_qubits() || angles.size() != tape.n_angles()) {
        throw ConfigError("tape/state/angle size mismatch");
    }
    const auto &ops = tape.ops();
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const Op &op = ops[i];
        switch (wire_count(op.kind)) {
        case 1:
            qsim::apply_single(state, target_matrix(op, i, angles), op.wires[0]);
            break;
        case 2:
            qsim::apply_controlled(state, target_matrix(op, i, angles),
                                   op.wires[0], op.wires[1]);
            break;
        default:
            qsim::apply_toffoli(state, op.wires[0], op.wires[1], op.wires[2]);
            break;
        }
    }
}

Program::Program(Tape tape) : tape_(std::move(tape)) {
    const auto &ops = tape_.ops();
    std::optional<Block> cur;
    auto flush = [&] {
        if (cur) {
            blocks_.push_back(*cur);
            cur.reset();
        }
    };
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const Op &op = ops[i];
        if (op.kind == GateKind::Toffoli) {
            flush();
            blocks_.push_back(Block{Block::Kind::Toffoli, 0, 0, i, i + 1});
            continue;
        }
        const std::size_t nw = wire_count(op.kind);
        if (cur) {
            std::vector<std::size_t> wires{cur->w0};
            if (cur->kind == Block::Kind::Two) {
                wires.push_back(cur->w1);
            }
            for (std::size_t k = 0; k < nw; ++k) {
                if (std::find(wires.begin(), wires.end(), op.wires[k]) ==
                    wires.end()) {
                    wires.push_back(op.wires[k]);
                }
            }
            if (wires.size() <= 2) {
                if (wires.size() == 2) {
                    cur->kind = Block::Kind::Two;
                    cur->w1 = wires[1];
                }
                cur->last = i + 1;
                continue;
            }
            flush();
        }
        Block b;
        b.first = i;
        b.last = i + 1;
        b.w0 = op.wires[0];
        if (nw == 2) {
            b.kind = Block::Kind::Two;
            b.w1 = op.wires[1];
        }
        cur = b;
    }
    flush();
}

Gate1Q Program::block_matrix1(const Block &b, std::span<const double> angles,
                              const AngleShift *shift) const {
    Gate1Q m = qsim::identity_gate();
    const auto &ops = tape_.ops();
    for (std::size_t i = b.first; i < b.last; ++i) {
        m = target_matrix(ops[i], i, angles, shift) * m;
    }
    return m;
}

Gate2Q Program::block_matrix2(const Block &b, std::span<const double> angles,
                              const AngleShift *shift) const {
    Gate2Q m = identity2();
    const auto &ops = tape_.ops();
    for (std::size_t i = b.first; i < b.last; ++i) {
        m = embed(ops[i], target_matrix(ops[i], i, angles, shift), false,
                  b.w0) *
            m;
    }
    return m;
}

std::vector<Program::Occurrence> Program::occurrences(const Block &b) const {
    std::vector<Occurrence> out;
    const auto &ops = tape_.ops();
    for (std::size_t i = b.first; i < b.last; ++i) {
        for (std::size_t s = 0; s < param_count(ops[i].kind); ++s) {
            out.push_back({i, s, static_cast<std::size_t>(ops[i].params[s])});
        }
    }
    return out;
}

std::vector<Gate1Q>
Program::block_derivatives1(const Block &b,
                            std::span<const double> angles) const {
    const auto &ops = tape_.ops();
    const std::size_t n = b.last - b.first;
    std::vector<Gate1Q> factors(n);
    for (std::size_t k = 0; k < n; ++k) {
        factors[k] = target_matrix(ops[b.first + k], b.first + k, angles);
    }
    // suffix[k] = F_{n-1} ... F_{k+1}
    std::vector<Gate1Q> suffix(n, qsim::identity_gate());
    for (std::size_t k = n - 1; k > 0; --k) {
        suffix[k - 1] = suffix[k] * factors[k];
    }
    std::vector<Gate1Q> out;
    Gate1Q prefix = qsim::identity_gate();
    for (std::size_t k = 0; k < n; ++k) {
        const Op &op = ops[b.first + k];
        for (std::size_t s = 0; s < param_count(op.kind); ++s) {
            out.push_back(suffix[k] * target_derivative(op, s, angles) *
                          prefix);
        }
        prefix = factors[k] * prefix;
    }
    return out;
}

std::vector<Gate2Q>
Program::block_derivatives2(const Block &b,
                            std::span<const double> angles) const {
    const auto &ops = tape_.ops();
    const std::size_t n = b.last - b.first;
    std::vector<Gate2Q> factors(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Op &op = ops[b.first + k];
        factors[k] = embed(op, target_matrix(op, b.first + k, angles), false,
                           b.w0);
    }
    std::vector<Gate2Q> suffix(n, identity2());
    for (std::size_t k = n - 1; k > 0; --k) {
        suffix[k - 1] = suffix[k] * factors[k];
    }
    std::vector<Gate2Q> out;
    Gate2Q prefix = identity2();
    for (std::size_t k = 0; k < n; ++k) {
        const Op &op = ops[b.first + k];
        for (std::size_t s = 0; s < param_count(op.kind); ++s) {
            out.push_back(suffix[k] *
                          embed(op, target_derivative(op, s, angles), true,
                                b.w0) *
                          prefix);
        }
        prefix = factors[k] * prefix;
    }
    return out;
}

void Program::run(qsim::Statevector &state, std::span<const double> angles,
                  const AngleShift *shift) const {
    if (state.n_qubits() != tape_.n_qubits() ||
        angles.size() != tape_.n_angles()) {
        throw ConfigError("tape/state/angle size mismatch");
    }
    const auto &ops = tape_.ops();
    for (const Block &b : blocks_) {
        switch (b.kind) {
        case Block::Kind::One:
            qsim::apply_single(state, block_matrix1(b, angles, shift), b.w0);
            break;
        case Block::Kind::Two:
            qsim::apply_two(state, block_matrix2(b, angles, shift), b.w0, b.w1);
            break;
        case Block::Kind::Toffoli: {
            const Op &op = ops[b.first];
            qsim::apply_toffoli(state, op.wires[0], op.wires[1], op.wires[2]);
            break;
        }
        }
    }
}

} // namespace qcnn::circuit
