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
 * @file circuit.hpp
 * The QCNN: angle encoding, two convolution layers around a pooling layer,
 * Toffoli interaction layers, classifier interaction with ancillas, and a
 * <Z> readout per ancilla.
 *
 * Data wires are 0..n_data-1, ancillas n_data..n_data+3.
 */
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcnn/qsim.hpp"
#include "qcnn/tape.hpp"

namespace qcnn::circuit {

inline constexpr std::size_t kNumAncilla = 4;
inline constexpr std::size_t kAnsatzParams = 15;
inline constexpr std::size_t kConvPasses = 2;

using Readout = std::array<double, kNumAncilla>;

struct QcnnConfig {
    std::size_t n_data = 8;
    std::size_t n_ancilla = kNumAncilla;

    /// 12 -> 8 data wires, 8 -> 4 data wires. Throws ConfigError otherwise.
    static QcnnConfig for_qubits(std::size_t total_qubits);

    [[nodiscard]] std::size_t total_qubits() const { return n_data + n_ancilla; }
    [[nodiscard]] std::size_t latent_dim() const { return n_data; }
    /// Active data wires after pooling.
    [[nodiscard]] std::size_t retained() const { return n_data / 2; }

    void validate() const;
    bool operator==(const QcnnConfig &) const = default;
};

/// Offsets of each layer's angles inside the flat parameter vector.
struct ParamLayout {
    std::size_t conv1 = 0;  // 2 passes x 15
    std::size_t pool = 0;   // phi0, phi1
    std::size_t conv2 = 0;  // 2 passes x 15
    std::size_t inter2 = 0; // RX.., RY.., RZ.. per retained wire
    std::size_t cls = 0;    // 3 per ancilla
    std::size_t total = 0;

    static ParamLayout for_config(const QcnnConfig &cfg);
    bool operator==(const ParamLayout &) const = default;
};

/// All trainable circuit angles, flat, in ParamLayout order.
class QcnnParams {
  public:
    explicit QcnnParams(const QcnnConfig &cfg);
    QcnnParams(const QcnnConfig &cfg, std::vector<double> values);

    [[nodiscard]] const QcnnConfig &config() const noexcept { return cfg_; }
    [[nodiscard]] const ParamLayout &layout() const noexcept { return layout_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    [[nodiscard]] std::span<double> values() noexcept { return values_; }
    [[nodiscard]] std::span<const double> values() const noexcept {
        return values_;
    }

    [[nodiscard]] std::span<const double> conv1(std::size_t pass) const;
    [[nodiscard]] std::span<const double> pool() const;
    [[nodiscard]] std::span<const double> conv2(std::size_t pass) const;
    [[nodiscard]] std::span<const double> inter2() const;
    [[nodiscard]] std::span<const double> cls() const;

    bool operator==(const QcnnParams &) const = default;

  private:
    QcnnConfig cfg_;
    ParamLayout layout_;
    std::vector<double> values_;
};

/// Encoding angles, each in [0, pi].
class LatentVector {
  public:
    /// Throws ConfigError if any angle is outside [0, pi] or non-finite.
    static LatentVector from_angles(std::vector<double> angles);

    [[nodiscard]] std::span<const double> angles() const noexcept {
        return angles_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return angles_.size(); }

  private:
    std::vector<double> angles_;
};

using WirePair = std::pair<std::size_t, std::size_t>;

/// Which wires a layer addresses. `pairs` is the convolution pattern for
/// the current stage.
struct WirePlan {
    std::vector<std::size_t> active;
    std::vector<std::size_t> ancillas;
    std::vector<WirePair> pairs;
};

/// Ring pair (first, last), then even pairs, then odd pairs over `active`.
/// Two wires degrade to the single pair.
std::vector<WirePair> conv_pattern(std::span<const std::size_t> active);

/// Plan before pooling: all data wires active.
WirePlan initial_plan(const QcnnConfig &cfg);

// Tape builders. Each appends the gates of one layer, reading angles from
// index `first_angle` onward.
void append_angle_encode(Tape &tape, std::span<const std::size_t> wires,
                         std::size_t first_angle);
void append_conv_ansatz(Tape &tape, WirePair pair, std::size_t first_angle,
                        const std::string &label = "conv");
void append_conv_layer(Tape &tape, const WirePlan &plan,
                       std::size_t first_angle,
                       const std::string &label = "conv");
/// Returns the plan with the even-indexed active wires retained.
WirePlan append_pool_layer(Tape &tape, const WirePlan &plan,
                           std::size_t first_angle);
/// Toffoli(w_i, w_{i+1} -> w_{i+2}). Returns false (no gates) when fewer
/// than three wires are active.
bool append_interaction_cascade(Tape &tape, const WirePlan &plan,
                                const std::string &label = "inter1");
void append_interaction_param(Tape &tape, const WirePlan &plan,
                              std::size_t first_angle);
void append_classifier_interaction(Tape &tape, const WirePlan &plan,
                                   std::size_t first_angle);

// State-level forms of the layers with literal angles.
void angle_encode(qsim::Statevector &state, const LatentVector &latent);
void conv_ansatz(qsim::Statevector &state, WirePair pair,
                 std::span<const double> params15);
void conv_layer(qsim::Statevector &state, const WirePlan &plan,
                std::span<const double> params15);
WirePlan pool_layer(qsim::Statevector &state, const WirePlan &plan,
                    std::span<const double> params2);
void interaction_cascade(qsim::Statevector &state, const WirePlan &plan);
void interaction_param(qsim::Statevector &state, const WirePlan &plan,
                       std::span<const double> angles);
void classifier_interaction(qsim::Statevector &state, const WirePlan &plan,
                            std::span<const double> beta);

/// The compiled QCNN for one configuration. Angle vector layout is
/// [circuit params..., latent angles...].
class Qcnn {
  public:
    explicit Qcnn(const QcnnConfig &cfg);

    [[nodiscard]] const QcnnConfig &config() const noexcept { return cfg_; }
    [[nodiscard]] const ParamLayout &layout() const noexcept { return layout_; }
    [[nodiscard]] const Program &program() const noexcept { return program_; }
    [[nodiscard]] const Tape &tape() const noexcept { return program_.tape(); }
    [[nodiscard]] std::size_t n_params() const noexcept { return layout_.total; }
    [[nodiscard]] std::size_t latent_offset() const noexcept {
        return layout_.total;
    }
    [[nodiscard]] std::span<const std::size_t> ancilla_wires() const noexcept {
        return ancillas_;
    }
    /// Notes about skipped layers (e.g. a cascade with fewer than 3 wires).
    [[nodiscard]] const std::vector<std::string> &warnings() const noexcept {
        return warnings_;
    }

    [[nodiscard]] std::vector<double>
    angles(std::span<const double> latent, const QcnnParams &params) const;

    /// Final state; latent angles are not range-checked here.
    [[nodiscard]] qsim::Statevector run(std::span<const double> latent,
                                        const QcnnParams &params) const;
    [[nodiscard]] Readout readout(const qsim::Statevector &state) const;

    [[nodiscard]] Readout forward(const LatentVector &latent,
                                  const QcnnParams &params) const;

    /// Tape dump prefixed with a comment header describing the angle split.
    [[nodiscard]] std::string describe() const;

  private:
    void check(std::span<const double> latent, const QcnnParams &params) const;

    QcnnConfig cfg_;
    ParamLayout layout_;
    std::vector<std::size_t> ancillas_;
    std::vector<std::string> warnings_;
    Program program_;
};

Readout forward(const LatentVector &latent, const QcnnParams &params,
                const QcnnConfig &cfg);

} // namespace qcnn::circuit
