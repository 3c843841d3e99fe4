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
 * @file oracle.hpp
 * Slow reference implementations used to validate the fast paths: dense
 * embeddings of gates, closed-form gate matrices, and statistics helpers.
 */

#pragma once

#include <cstddef>
#include <random>

#include "qcnn/qsim.hpp"

namespace qcnn::oracle {

/// Closed-form entries, written out independently of qsim::make_rotation.
qsim::Gate1Q rotation(qsim::Axis axis, double angle);
/// [[cos t/2, -e^{i l} sin t/2], [e^{i p} sin t/2, e^{i(p+l)} cos t/2]] up to
/// the global phase e^{-i(p+l)/2} that the qsim Z-X decomposition carries.
qsim::Gate1Q u3(double theta, double phi, double lam);

/// Dense 2^n matrices acting on the full register.
qsim::DenseMatrix embed_single(std::size_t n, const qsim::Gate1Q &g,
                               std::size_t wire);
qsim::DenseMatrix embed_controlled(std::size_t n, const qsim::Gate1Q &g,
                                   std::size_t control, std::size_t target);
/// Gate2Q local index is bit(w0) + 2 * bit(w1).
qsim::DenseMatrix embed_two(std::size_t n, const qsim::Gate2Q &g,
                            std::size_t w0, std::size_t w1);
qsim::DenseMatrix embed_toffoli(std::size_t n, std::size_t c1, std::size_t c2,
                                std::size_t target);

/// y = M x, no unitarity check.
qsim::Statevector multiply(const qsim::DenseMatrix &m,
                           const qsim::Statevector &x);

/// Haar-ish random normalized state (Gaussian amplitudes).
qsim::Statevector random_state(std::size_t n, std::mt19937_64 &rng);

/// Largest per-amplitude modulus difference.
double max_abs_diff(const qsim::Statevector &a, const qsim::Statevector &b);

/// Survival function of the chi-square distribution with 3 degrees of
/// freedom.
double chi_square_sf3(double x);

/// |a - b| / max(|a|, |b|, floor).
double relative_error(double a, double b, double floor);

} // namespace qcnn::oracle
