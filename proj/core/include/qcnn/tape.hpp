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
/**
 * @file tape.hpp
 * Ordered gate list referring to angles by index, plus a fused executor.
 *
 * A Tape is the single description of a parameterized circuit: the forward
 * pass, both gradient engines, the text dump and the dense-oracle replay
 * tests all consume it.
 */
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcnn/qsim.hpp"

namespace qcnn::circuit {

enum class GateKind { RX, RY, RZ, U3, X, CNOT, CRX, CRZ, Toffoli };

std::string_view gate_name(GateKind kind);
std::optional<GateKind> parse_gate_name(std::string_view name);
std::size_t wire_count(GateKind kind);
std::size_t param_count(GateKind kind);

/// Controlled gates carry a single-qubit target gate.
bool is_controlled(GateKind kind);

inline constexpr int kNoParam = -1;

/// One gate. Controls come first in `wires`, the target last. U3 params are
/// (theta, phi, lam).
struct Op {
    GateKind kind = GateKind::X;
    std::array<std::size_t, 3> wires{};
    std::array<int, 3> params{kNoParam, kNoParam, kNoParam};
    std::string label;

    [[nodiscard]] std::size_t target() const {
        return wires[wire_count(kind) - 1];
    }
};

/// Shifts one occurrence of an angle (op index, param slot) by `delta`,
/// leaving other ops that share the same angle untouched.
struct AngleShift {
    std::size_t op = 0;
    std::size_t slot = 0;
    double delta = 0.0;
};

class Tape {
  public:
    Tape(std::size_t n_qubits, std::size_t n_angles);

    /// Validates wires and angle indices; throws ConfigError.
    void add(Op op);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t n_angles() const noexcept { return n_angles_; }
    [[nodiscard]] const std::vector<Op> &ops() const noexcept { return ops_; }

    /// Number of times angle `index` is referenced.
    [[nodiscard]] std::size_t occurrences(std::size_t index) const;

    /// Line-oriented text form, e.g. "U3 q0 a0 a1 a2 @conv1.pass0".
    [[nodiscard]] std::string dump() const;
    static Tape parse(std::string_view text);

  private:
    std::size_t n_qubits_;
    std::size_t n_angles_;
    std::vector<Op> ops_;
};

/// Single-qubit matrix acting on the op's target (the gate applied when all
/// controls are set). Applies `shift` when it addresses op `op_index`.
qsim::Gate1Q target_matrix(const Op &op, std::size_t op_index,
                           std::span<const double> angles,
                           const AngleShift *shift = nullptr);

/// d(target_matrix)/d(angle in `slot`).
qsim::Gate1Q target_derivative(const Op &op, std::size_t slot,
                               std::span<const double> angles);

/// Gate-by-gate execution with the specialized kernels, no fusion.
void run_unfused(const Tape &tape, qsim::Statevector &state,
                 std::span<const double> angles);

/// Runs of consecutive ops touching at most two wires, fused into one
/// matrix; Toffolis stand alone.
struct Block {
    enum class Kind { One, Two, Toffoli };
    Kind kind = Kind::One;
    std::size_t w0 = 0;
    std::size_t w1 = 0;
    std::size_t first = 0; // op range [first, last)
    std::size_t last = 0;
};

class Program {
  public:
    explicit Program(Tape tape);

    [[nodiscard]] const Tape &tape() const noexcept { return tape_; }
    [[nodiscard]] const std::vector<Block> &blocks() const noexcept {
        return blocks_;
    }

    void run(qsim::Statevector &state, std::span<const double> angles,
             const AngleShift *shift = nullptr) const;

    /// Fused matrix of a One block.
    [[nodiscard]] qsim::Gate1Q
    block_matrix1(const Block &b, std::span<const double> angles,
                  const AngleShift *shift = nullptr) const;
    /// Fused matrix of a Two block in the (w0, w1) basis.
    [[nodiscard]] qsim::Gate2Q
    block_matrix2(const Block &b, std::span<const double> angles,
                  const AngleShift *shift = nullptr) const;

    /// Derivatives of a block matrix with respect to every parameterized
    /// (op, slot) occurrence inside it, in op order.
    struct Occurrence {
        std::size_t op;
        std::size_t slot;
        std::size_t angle;
    };
    [[nodiscard]] std::vector<Occurrence> occurrences(const Block &b) const;
    [[nodiscard]] std::vector<qsim::Gate1Q>
    block_derivatives1(const Block &b, std::span<const double> angles) const;
    [[nodiscard]] std::vector<qsim::Gate2Q>
    block_derivatives2(const Block &b, std::span<const double> angles) const;

  private:
    Tape tape_;
    std::vector<Block> blocks_;
};

} // namespace qcnn::circuit
