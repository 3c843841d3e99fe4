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
 * @file qsim.hpp
 * Dense statevector simulator: gate matrices, in-place kernels and Z
 * expectations.
 *
 * Wire k is the k-th least-significant bit of a basis-state index. Rotations
 * use the half-angle convention R_a(t) = exp(-i t P_a / 2).
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qcnn::qsim {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 24;

/// State of `n` qubits as 2^n complex amplitudes.
class Statevector {
  public:
    /// |0...0> on `n_qubits` wires. Throws ConfigError outside [1, 24].
    explicit Statevector(std::size_t n_qubits);

    /// Takes ownership of raw amplitudes; the length must be a power of two.
    static Statevector from_amplitudes(std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }

    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amps_; }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amps_;
    }
    Complex &operator[](std::size_t i) noexcept { return amps_[i]; }
    const Complex &operator[](std::size_t i) const noexcept { return amps_[i]; }

    /// L2 norm.
    [[nodiscard]] double norm() const noexcept;

    /// Resets to |0...0>.
    void reset() noexcept;

    bool operator==(const Statevector &) const = default;

  private:
    Statevector() = default;

    std::size_t n_qubits_ = 0;
    std::vector<Complex> amps_;
};

inline Statevector new_statevector(std::size_t n_qubits) {
    return Statevector(n_qubits);
}

/// 2x2 matrix, row-major: {m00, m01, m10, m11}.
struct Gate1Q {
    std::array<Complex, 4> m{};

    Complex &operator()(std::size_t r, std::size_t c) { return m[2 * r + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const {
        return m[2 * r + c];
    }

    [[nodiscard]] Gate1Q adjoint() const;
    [[nodiscard]] bool is_unitary(double tol = 1e-12) const;

    friend Gate1Q operator*(const Gate1Q &a, const Gate1Q &b);
    bool operator==(const Gate1Q &) const = default;
};

/// 4x4 matrix on an ordered wire pair (w0, w1). Local basis index is
/// bit(w0) + 2 * bit(w1).
struct Gate2Q {
    std::array<Complex, 16> m{};

    Complex &operator()(std::size_t r, std::size_t c) { return m[4 * r + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const {
        return m[4 * r + c];
    }

    [[nodiscard]] Gate2Q adjoint() const;
    [[nodiscard]] bool is_unitary(double tol = 1e-12) const;

    friend Gate2Q operator*(const Gate2Q &a, const Gate2Q &b);
};

enum class Axis { X, Y, Z };

Gate1Q identity_gate();
Gate1Q pauli(Axis axis);
inline Gate1Q pauli_x() { return pauli(Axis::X); }

/// exp(-i angle P_axis / 2). Throws std::invalid_argument for non-finite
/// angles.
Gate1Q make_rotation(Axis axis, double angle);

/// Rz(phi) Rx(-pi/2) Rz(theta) Rx(pi/2) Rz(lam), Rz(lam) acting first.
Gate1Q make_u3(double theta, double phi, double lam);

/// Identity except on (w0, w1), where the two single-qubit gates act as
/// low (w0) and high (w1) factors.
Gate2Q kron(const Gate1Q &high, const Gate1Q &low);

void apply_single(Statevector &state, const Gate1Q &gate, std::size_t wire);

/// Applies `gate` to `target` on the subspace where `control` is 1.
void apply_controlled(Statevector &state, const Gate1Q &gate,
                      std::size_t control, std::size_t target);

void apply_two(Statevector &state, const Gate2Q &gate, std::size_t w0,
               std::size_t w1);

/// Flips `target` where both controls are 1.
void apply_toffoli(Statevector &state, std::size_t c1, std::size_t c2,
                   std::size_t target);

/// <Z> on `wire`: sum |a_i|^2 (+1 if bit clear, -1 if set).
double expectation_z(const Statevector &state, std::size_t wire);

/// sum_i conj(bra_i) ket_i
Complex inner_product(const Statevector &bra, const Statevector &ket);

/// R(i, j) = sum over the other wires of conj(bra[rest, i]) * ket[rest, j],
/// so that <bra| (I x D) |ket> = sum_ij D(i, j) R(i, j).
Gate1Q reduced_overlap(const Statevector &bra, const Statevector &ket,
                       std::size_t wire);
Gate2Q reduced_overlap(const Statevector &bra, const Statevector &ket,
                       std::size_t w0, std::size_t w1);

/// Full 2^n x 2^n row-major matrix. Used only to validate the kernels.
struct DenseMatrix {
    std::size_t dim = 0;
    std::vector<Complex> data;

    explicit DenseMatrix(std::size_t d) : dim(d), data(d * d) {}
    static DenseMatrix identity(std::size_t d);

    Complex &operator()(std::size_t r, std::size_t c) {
        return data[r * dim + c];
    }
    const Complex &operator()(std::size_t r, std::size_t c) const {
        return data[r * dim + c];
    }

    friend DenseMatrix operator*(const DenseMatrix &a, const DenseMatrix &b);
    [[nodiscard]] bool is_unitary(double tol = 1e-10) const;
};

inline constexpr std::size_t kMaxDenseQubits = 10;

/// Plain matrix-vector product. Throws std::invalid_argument on dimension
/// mismatch, more than kMaxDenseQubits wires, or a non-unitary matrix.
void apply_dense_oracle(Statevector &state, const DenseMatrix &unitary);

} // namespace qcnn::qsim
