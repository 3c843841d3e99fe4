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
 * @file grad.hpp
 * Gradients of weighted <Z> observables with respect to circuit angles.
 *
 * parameter_shift is the exact reference: every occurrence of an angle is
 * shifted separately (shared angles get the sum). Controlled rotations use
 * the four-term rule. adjoint gives the same numbers in a single reverse
 * sweep and is what training uses. finite_difference is the test oracle.
 */
#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qcnn/circuit.hpp"
#include "qcnn/qsim.hpp"
#include "qcnn/tape.hpp"

namespace qcnn::grad {

/// f(state) = sum_k weight_k <Z_{wire_k}>
struct ZObservable {
    std::vector<std::pair<std::size_t, double>> terms;

    [[nodiscard]] double evaluate(const qsim::Statevector &state) const;
};

std::vector<double> shift_gradient(const circuit::Program &program,
                                   std::span<const double> angles,
                                   const ZObservable &obs);

std::vector<double> finite_difference_gradient(const circuit::Program &program,
                                               std::span<const double> angles,
                                               const ZObservable &obs,
                                               double eps = 1e-5);

/// Reverse sweep over fused blocks. `final_state`, when given, must be the
/// output of program.run(angles) and saves one forward pass.
std::vector<double> adjoint_gradient(const circuit::Program &program,
                                     std::span<const double> angles,
                                     const ZObservable &obs,
                                     const qsim::Statevector *final_state =
                                         nullptr);

/// Gradient split into circuit parameters and encoding angles.
struct GradientVector {
    std::vector<double> d_params;
    std::vector<double> d_latent;
};

/// `upstream` is d(loss)/d(readout).
GradientVector parameter_shift(const circuit::Qcnn &qcnn,
                               std::span<const double> latent,
                               const circuit::QcnnParams &params,
                               const circuit::Readout &upstream);

GradientVector finite_difference(const circuit::Qcnn &qcnn,
                                 std::span<const double> latent,
                                 const circuit::QcnnParams &params,
                                 const circuit::Readout &upstream,
                                 double eps = 1e-5);

GradientVector adjoint(const circuit::Qcnn &qcnn,
                       std::span<const double> latent,
                       const circuit::QcnnParams &params,
                       const circuit::Readout &upstream,
                       const qsim::Statevector *final_state = nullptr);

/// Readout weighted by `upstream`, as an observable on the ancilla wires.
ZObservable readout_observable(const circuit::Qcnn &qcnn,
                               const circuit::Readout &upstream);

} // namespace qcnn::grad
