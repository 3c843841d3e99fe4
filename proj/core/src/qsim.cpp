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

#include "qcnn/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qcnn/errors.hpp"

namespace qcnn::qsim {
namespace {

using namespace std::complex_literals;

/// Inserts a zero bit at position `pos` of `k`.
constexpr std::size_t insert_zero(std::size_t k, std::size_t pos) {
    const std::size_t low = k & ((std::size_t{1} << pos) - 1);
    return ((k >> pos) << (pos + 1)) | low;
}

void check_wire(const Statevector &state, std::size_t wire) {
    if (wire >= state.n_qubits()) {
        throw std::out_of_range("wire " + std::to_string(wire) +
                                " out of range for " +
                                std::to_string(state.n_qubits()) + " qubits");
    }
}

void check_finite(double angle) {
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("rotation angle must be finite");
    }
}

} // namespace

Statevector::Statevector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("qubit count " + std::to_string(n_qubits) +
                          " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

Statevector Statevector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t n = amplitudes.size();
    if (n < 2 || !std::has_single_bit(n) ||
        std::countr_zero(n) > static_cast<int>(kMaxQubits)) {
        throw ConfigError("amplitude count must be 2^n with 1 <= n <= 24");
    }
    Statevector sv;
    sv.n_qubits_ = static_cast<std::size_t>(std::countr_zero(n));
    sv.amps_ = std::move(amplitudes);
    return sv;
}

double Statevector::norm() const noexcept {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

void Statevector::reset() noexcept {
    std::fill(amps_.begin(), amps_.end(), Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

Gate1Q Gate1Q::adjoint() const {
    return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]),
             std::conj(m[3])}};
}

bool Gate1Q::is_unitary(double tol) const {
    const Gate1Q p = adjoint() * *this;
    return std::abs(p.m[0] - 1.0) <= tol && std::abs(p.m[1]) <= tol &&
           std::abs(p.m[2]) <= tol && std::abs(p.m[3] - 1.0) <= tol;
}

Gate1Q operator*(const Gate1Q &a, const Gate1Q &b) {
    Gate1Q r;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
        }
    }
    return r;
}

Gate2Q Gate2Q::adjoint() const {
    Gate2Q r;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            r(i, j) = std::conj((*this)(j, i));
        }
    }
    return r;
}

bool Gate2Q::is_unitary(double tol) const {
    const Gate2Q p = adjoint() * *this;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const Complex expect = (i == j) ? 1.0 : 0.0;
            if (std::abs(p(i, j) - expect) > tol) {
                return false;
            }
        }
    }
    return true;
}

Gate2Q operator*(const Gate2Q &a, const Gate2Q &b) {
    Gate2Q r;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t k = 0; k < 4; ++k) {
            const Complex aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < 4; ++j) {
                r(i, j) += aik * b(k, j);
            }
        }
    }
    return r;
}

Gate1Q identity_gate() { return {{1.0, 0.0, 0.0, 1.0}}; }

Gate1Q pauli(Axis axis) {
    switch (axis) {
    case Axis::X:
        return {{0.0, 1.0, 1.0, 0.0}};
    case Axis::Y:
        return {{0.0, -1i, 1i, 0.0}};
    case Axis::Z:
        return {{1.0, 0.0, 0.0, -1.0}};
    }
    return identity_gate();
}

Gate1Q make_rotation(Axis axis, double angle) {
    check_finite(angle);
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    switch (axis) {
    case Axis::X:
        return {{c, -1i * s, -1i * s, c}};
    case Axis::Y:
        return {{c, -s, s, c}};
    case Axis::Z:
        return {{Complex{c, -s}, 0.0, 0.0, Complex{c, s}}};
    }
    return identity_gate();
}

Gate1Q make_u3(double theta, double phi, double lam) {
    constexpr double half_pi = 1.5707963267948966;
    return make_rotation(Axis::Z, phi) * make_rotation(Axis::X, -half_pi) *
           make_rotation(Axis::Z, theta) * make_rotation(Axis::X, half_pi) *
           make_rotation(Axis::Z, lam);
}

Gate2Q kron(const Gate1Q &high, const Gate1Q &low) {
    Gate2Q r;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            r(i, j) = high(i >> 1, j >> 1) * low(i & 1, j & 1);
        }
    }
    return r;
}

void apply_single(Statevector &state, const Gate1Q &gate, std::size_t wire) {
    check_wire(state, wire);
    auto amps = state.amplitudes();
    const std::size_t stride = std::size_t{1} << wire;
    const std::size_t half = amps.size() / 2;
    const Complex g00 = gate.m[0], g01 = gate.m[1], g10 = gate.m[2],
                  g11 = gate.m[3];
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero(k, wire);
        const std::size_t i1 = i0 | stride;
        const Complex a0 = amps[i0];
        const Complex a1 = amps[i1];
        amps[i0] = g00 * a0 + g01 * a1;
        amps[i1] = g10 * a0 + g11 * a1;
    }
}

void apply_controlled(Statevector &state, const Gate1Q &gate,
                      std::size_t control, std::size_t target) {
    check_wire(state, control);
    check_wire(state, target);
    if (control == target) {
        throw std::invalid_argument("control and target must differ");
    }
    auto amps = state.amplitudes();
    const std::size_t lo = std::min(control, target);
    const std::size_t hi = std::max(control, target);
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    const std::size_t quarter = amps.size() / 4;
    const Complex g00 = gate.m[0], g01 = gate.m[1], g10 = gate.m[2],
                  g11 = gate.m[3];
    for (std::size_t k = 0; k < quarter; ++k) {
        const std::size_t base = insert_zero(insert_zero(k, lo), hi);
        const std::size_t i0 = base | cbit;
        const std::size_t i1 = i0 | tbit;
        const Complex a0 = amps[i0];
        const Complex a1 = amps[i1];
        amps[i0] = g00 * a0 + g01 * a1;
        amps[i1] = g10 * a0 + g11 * a1;
    }
}

void apply_two(Statevector &state, const Gate2Q &gate, std::size_t w0,
               std::size_t w1) {
    check_wire(state, w0);
    check_wire(state, w1);
    if (w0 == w1) {
        throw std::invalid_argument("two-qubit gate wires must differ");
    }
    auto amps = state.amplitudes();
    const std::size_t lo = std::min(w0, w1);
    const std::size_t hi = std::max(w0, w1);
    const std::size_t b0 = std::size_t{1} << w0;
    const std::size_t b1 = std::size_t{1} << w1;
    const std::size_t quarter = amps.size() / 4;
    const auto &g = gate.m;
    for (std::size_t k = 0; k < quarter; ++k) {
        const std::size_t base = insert_zero(insert_zero(k, lo), hi);
        const std::array<std::size_t, 4> idx{base, base | b0, base | b1,
                                             base | b0 | b1};
        const Complex a0 = amps[idx[0]];
        const Complex a1 = amps[idx[1]];
        const Complex a2 = amps[idx[2]];
        const Complex a3 = amps[idx[3]];
        for (std::size_t r = 0; r < 4; ++r) {
            amps[idx[r]] = g[4 * r] * a0 + g[4 * r + 1] * a1 +
                           g[4 * r + 2] * a2 + g[4 * r + 3] * a3;
        }
    }
}

void apply_toffoli(Statevector &state, std::size_t c1, std::size_t c2,
                   std::size_t target) {
    check_wire(state, c1);
    check_wire(state, c2);
    check_wire(state, target);
    if (c1 == c2 || c1 == target || c2 == target) {
        throw std::invalid_argument("Toffoli wires must be pairwise distinct");
    }
    auto amps = state.amplitudes();
    std::array<std::size_t, 3> w{c1, c2, target};
    std::sort(w.begin(), w.end());
    const std::size_t cmask = (std::size_t{1} << c1) | (std::size_t{1} << c2);
    const std::size_t tbit = std::size_t{1} << target;
    const std::size_t eighth = amps.size() / 8;
    for (std::size_t k = 0; k < eighth; ++k) {
        const std::size_t base =
            insert_zero(insert_zero(insert_zero(k, w[0]), w[1]), w[2]);
        std::swap(amps[base | cmask], amps[base | cmask | tbit]);
    }
}

double expectation_z(const Statevector &state, std::size_t wire) {
    check_wire(state, wire);
    const auto amps = state.amplitudes();
    const std::size_t bit = std::size_t{1} << wire;
    double plus = 0.0;
    double minus = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & bit) {
            minus += std::norm(amps[i]);
        } else {
            plus += std::norm(amps[i]);
        }
    }
    return plus - minus;
}

Complex inner_product(const Statevector &bra, const Statevector &ket) {
    if (bra.size() != ket.size()) {
        throw std::invalid_argument("inner product of mismatched states");
    }
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < bra.size(); ++i) {
        s += std::conj(bra[i]) * ket[i];
    }
    return s;
}

Gate1Q reduced_overlap(const Statevector &bra, const Statevector &ket,
                       std::size_t wire) {
    if (bra.size() != ket.size()) {
        throw std::invalid_argument("reduced overlap of mismatched states");
    }
    check_wire(ket, wire);
    const std::size_t stride = std::size_t{1} << wire;
    Gate1Q r;
    for (std::size_t k = 0; k < ket.size() / 2; ++k) {
        const std::size_t i0 = insert_zero(k, wire);
        const std::size_t i1 = i0 | stride;
        const Complex l0 = std::conj(bra[i0]);
        const Complex l1 = std::conj(bra[i1]);
        r.m[0] += l0 * ket[i0];
        r.m[1] += l0 * ket[i1];
        r.m[2] += l1 * ket[i0];
        r.m[3] += l1 * ket[i1];
    }
    return r;
}

Gate2Q reduced_overlap(const Statevector &bra, const Statevector &ket,
                       std::size_t w0, std::size_t w1) {
    if (bra.size() != ket.size()) {
        throw std::invalid_argument("reduced overlap of mismatched states");
    }
    check_wire(ket, w0);
    check_wire(ket, w1);
    if (w0 == w1) {
        throw std::invalid_argument("reduced overlap wires must differ");
    }
    const std::size_t lo = std::min(w0, w1);
    const std::size_t hi = std::max(w0, w1);
    const std::size_t b0 = std::size_t{1} << w0;
    const std::size_t b1 = std::size_t{1} << w1;
    Gate2Q r;
    for (std::size_t k = 0; k < ket.size() / 4; ++k) {
        const std::size_t base = insert_zero(insert_zero(k, lo), hi);
        const std::array<std::size_t, 4> idx{base, base | b0, base | b1,
                                             base | b0 | b1};
        const std::array<Complex, 4> kv{ket[idx[0]], ket[idx[1]], ket[idx[2]],
                                        ket[idx[3]]};
        for (std::size_t i = 0; i < 4; ++i) {
            const Complex l = std::conj(bra[idx[i]]);
            for (std::size_t j = 0; j < 4; ++j) {
                r.m[4 * i + j] += l * kv[j];
            }
        }
    }
    return r;
}

DenseMatrix DenseMatrix::identity(std::size_t d) {
    DenseMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

DenseMatrix operator*(const DenseMatrix &a, const DenseMatrix &b) {
    if (a.dim != b.dim) {
        throw std::invalid_argument("dense matrix dimension mismatch");
    }
    DenseMatrix r(a.dim);
    for (std::size_t i = 0; i < a.dim; ++i) {
        for (std::size_t k = 0; k < a.dim; ++k) {
            const Complex aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < a.dim; ++j) {
                r(i, j) += aik * b(k, j);
            }
        }
    }
    return r;
}

bool DenseMatrix::is_unitary(double tol) const {
    // Accumulate U^dagger U row by row over nonzero entries; gate matrices
    // are sparse so this stays far below d^3.
    std::vector<Complex> gram(dim * dim);
    std::vector<std::size_t> nz;
    for (std::size_t k = 0; k < dim; ++k) {
        nz.clear();
        for (std::size_t c = 0; c < dim; ++c) {
            if ((*this)(k, c) != 0.0) {
                nz.push_back(c);
            }
        }
        for (const std::size_t i : nz) {
            const Complex ci = std::conj((*this)(k, i));
            for (const std::size_t j : nz) {
                gram[i * dim + j] += ci * (*this)(k, j);
            }
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const Complex expect = (i == j) ? 1.0 : 0.0;
            if (std::abs(gram[i * dim + j] - expect) > tol) {
                return false;
            }
        }
    }
    return true;
}

void apply_dense_oracle(Statevector &state, const DenseMatrix &unitary) {
    if (state.n_qubits() > kMaxDenseQubits) {
        throw std::invalid_argument("dense oracle limited to " +
                                    std::to_string(kMaxDenseQubits) +
                                    " qubits");
    }
    if (unitary.dim != state.size()) {
        throw std::invalid_argument("dense oracle dimension mismatch");
    }
    if (!unitary.is_unitary()) {
        throw std::invalid_argument("dense oracle matrix is not unitary");
    }
    std::vector<Complex> out(state.size());
    for (std::size_t i = 0; i < unitary.dim; ++i) {
        Complex s{0.0, 0.0};
        for (std::size_t j = 0; j < unitary.dim; ++j) {
            s += unitary(i, j) * state[j];
        }
        out[i] = s;
    }
    std::copy(out.begin(), out.end(), state.amplitudes().begin());
}

} // namespace qcnn::qsim
