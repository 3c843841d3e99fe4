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

#include "qcnn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qcnn::oracle {

using qsim::Complex;
using qsim::DenseMatrix;

qsim::Gate1Q rotation(qsim::Axis axis, double angle) {
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    const Complex i(0.0, 1.0);
    switch (axis) {
    case qsim::Axis::X:
        return {{c, -i * s, -i * s, c}};
    case qsim::Axis::Y:
        return {{c, -s, s, c}};
    case qsim::Axis::Z:
    default:
        return {{std::exp(-i * (angle / 2)), 0.0, 0.0, std::exp(i * (angle / 2))}};
    }
}

qsim::Gate1Q u3(double theta, double phi, double lam) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const Complex i(0.0, 1.0);
    const Complex phase = std::exp(-i * ((phi + lam) / 2));
    return {{phase * c, -phase * std::exp(i * lam) * s,
             phase * std::exp(i * phi) * s,
             phase * std::exp(i * (phi + lam)) * c}};
}

DenseMatrix embed_single(std::size_t n, const qsim::Gate1Q &g,
                         std::size_t wire) {
    const std::size_t d = std::size_t{1} << n;
    const std::size_t bit = std::size_t{1} << wire;
    DenseMatrix m(d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            if ((r & ~bit) == (c & ~bit)) {
                m(r, c) = g.m[((r & bit) ? 2 : 0) + ((c & bit) ? 1 : 0)];
            }
        }
    }
    return m;
}

DenseMatrix embed_controlled(std::size_t n, const qsim::Gate1Q &g,
                             std::size_t control, std::size_t target) {
    const std::size_t d = std::size_t{1} << n;
    const std::size_t cb = std::size_t{1} << control;
    const DenseMatrix full = embed_single(n, g, target);
    DenseMatrix m(d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            if (c & cb) {
                m(r, c) = full(r, c);
            } else if (r == c) {
                m(r, c) = 1.0;
            }
        }
    }
    return m;
}

DenseMatrix embed_two(std::size_t n, const qsim::Gate2Q &g, std::size_t w0,
                      std::size_t w1) {
    const std::size_t d = std::size_t{1} << n;
    const std::size_t b0 = std::size_t{1} << w0, b1 = std::size_t{1} << w1;
    const std::size_t mask = b0 | b1;
    auto local = [&](std::size_t x) {
        return ((x & b0) ? 1u : 0u) + ((x & b1) ? 2u : 0u);
    };
    DenseMatrix m(d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            if ((r & ~mask) == (c & ~mask)) {
                m(r, c) = g.m[local(r) * 4 + local(c)];
            }
        }
    }
    return m;
}

DenseMatrix embed_toffoli(std::size_t n, std::size_t c1, std::size_t c2,
                          std::size_t target) {
    const std::size_t d = std::size_t{1} << n;
    const std::size_t both = (std::size_t{1} << c1) | (std::size_t{1} << c2);
    DenseMatrix m(d);
    for (std::size_t c = 0; c < d; ++c) {
        const std::size_t r =
            (c & both) == both ? c ^ (std::size_t{1} << target) : c;
        m(r, c) = 1.0;
    }
    return m;
}

qsim::Statevector multiply(const DenseMatrix &m, const qsim::Statevector &x) {
    std::vector<Complex> y(m.dim);
    for (std::size_t r = 0; r < m.dim; ++r) {
        Complex acc = 0.0;
        for (std::size_t c = 0; c < m.dim; ++c) {
            acc += m(r, c) * x[c];
        }
        y[r] = acc;
    }
    return qsim::Statevector::from_amplitudes(std::move(y));
}

qsim::Statevector random_state(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Complex> a(std::size_t{1} << n);
    double norm2 = 0.0;
    for (auto &v : a) {
        v = {g(rng), g(rng)};
        norm2 += std::norm(v);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto &v : a) {
        v *= inv;
    }
    return qsim::Statevector::from_amplitudes(std::move(a));
}

double max_abs_diff(const qsim::Statevector &a, const qsim::Statevector &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

double chi_square_sf3(double x) {
    if (x <= 0.0) {
        return 1.0;
    }
    return std::erfc(std::sqrt(x / 2.0)) +
           std::sqrt(2.0 * x / std::numbers::pi) * std::exp(-x / 2.0);
}

double relative_error(double a, double b, double floor) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

} // namespace qcnn::oracle
