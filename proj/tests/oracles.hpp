// Copyright 2026 The vla Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense reference computations used as independent test oracles. Nothing here
// calls into the statevector kernels or the Pauli masks of the library.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "vla/pauli.hpp"
#include "vla/statevec.hpp"

namespace oracle {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli2(char c) {
    Mat m(2, 2);
    switch (c) {
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: m << 1, 0, 0, 1; break;
    }
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

/// Kronecker product of single-qubit Pauli matrices, letter 0 leftmost.
inline Mat pauli_string(const std::string& letters) {
    Mat m = Mat::Identity(1, 1);
    for (char c : letters) m = kron(m, pauli2(c));
    return m;
}

inline Mat sum_matrix(const vla::PauliSum& s) {
    const auto dim = Eigen::Index(1) << s.qubit_count();
    Mat m = Mat::Zero(dim, dim);
    for (const auto& t : s.terms()) m += t.coefficient * pauli_string(t.letters);
    return m;
}

/// Operator `u` on qubit q of an n-qubit register (qubit 0 leftmost).
inline Mat embed(const Mat& u, std::size_t q, std::size_t n) {
    Mat m = Mat::Identity(1, 1);
    for (std::size_t k = 0; k < n; ++k) m = kron(m, k == q ? u : Mat(Mat::Identity(2, 2)));
    return m;
}

inline Mat rotation(char axis, double angle) {
    const Mat gen = C(0.0, -0.5 * angle) * pauli2(axis);
    return gen.exp();
}

inline Mat cnot(std::size_t control, std::size_t target, std::size_t n) {
    Mat p0(2, 2), p1(2, 2);
    p0 << 1, 0, 0, 0;
    p1 << 0, 0, 0, 1;
    return embed(p0, control, n) + embed(p1, control, n) * embed(pauli2('X'), target, n);
}

inline Mat gate_matrix(const vla::Gate& g, double angle, std::size_t n) {
    switch (g.kind) {
        case vla::GateKind::Ry: return embed(rotation('Y', angle), g.target, n);
        case vla::GateKind::Rz: return embed(rotation('Z', angle), g.target, n);
        case vla::GateKind::CNOT: return cnot(*g.control, g.target, n);
        case vla::GateKind::X: return embed(pauli2('X'), g.target, n);
        case vla::GateKind::Y: return embed(pauli2('Y'), g.target, n);
        case vla::GateKind::Z: return embed(pauli2('Z'), g.target, n);
    }
    return {};
}

inline Mat circuit_matrix(const vla::Circuit& c, const std::vector<double>& theta) {
    const std::size_t n = c.qubit_count();
    const auto dim = Eigen::Index(1) << n;
    Mat u = Mat::Identity(dim, dim);
    for (std::size_t k = 0; k < c.gates().size(); ++k) {
        const auto& g = c.gates()[k];
        const double a = g.slot ? theta[*g.slot] : g.angle;
        u = gate_matrix(g, a, n) * u;
    }
    return u;
}

inline Vec circuit_state(const vla::Circuit& c, const std::vector<double>& theta) {
    const auto dim = Eigen::Index(1) << c.qubit_count();
    Vec zero = Vec::Zero(dim);
    zero(0) = 1.0;
    return circuit_matrix(c, theta) * zero;
}

inline Vec to_vec(const vla::StateVector& s) {
    Vec v(static_cast<Eigen::Index>(s.dimension()));
    for (std::size_t i = 0; i < s.dimension(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
    return v;
}

inline double fidelity(const Vec& a, const Vec& b) {
    return std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

inline Mat random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = C(g(rng), g(rng));
    return m;
}

inline std::vector<double> random_angles(std::size_t count, std::mt19937_64& rng, double scale = M_PI) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> t(count);
    for (auto& x : t) x = u(rng);
    return t;
}

/// Parameter-free entangling preparation circuit with random angles.
inline vla::Circuit random_prep(std::size_t n, std::mt19937_64& rng) {
    vla::Circuit p(n);
    const auto a = random_angles(2 * n, rng);
    for (std::size_t q = 0; q < n; ++q) {
        p.ry_fixed(q, a[2 * q]);
        p.rz_fixed(q, a[2 * q + 1]);
    }
    for (std::size_t q = 0; q + 1 < n; ++q) p.cnot(q, q + 1);
    return p;
}

/// Random Hermitian positive-definite matrix with eigenvalues in [1, kappa] (both attained).
inline Mat random_hpd(Eigen::Index dim, double kappa, std::mt19937_64& rng) {
    Eigen::HouseholderQR<Mat> qr(random_complex(dim, dim, rng));
    const Mat q = qr.householderQ();
    std::uniform_real_distribution<double> u(1.0, kappa);
    Eigen::VectorXd ev(dim);
    for (Eigen::Index i = 0; i < dim; ++i) ev(i) = u(rng);
    ev(0) = 1.0;
    if (dim > 1) ev(1) = kappa;
    return q * ev.cast<C>().asDiagonal() * q.adjoint();
}

/// Normalized M^-1 v.
inline Vec solve_state(const Mat& m, const Vec& v) {
    Vec x = m.fullPivLu().solve(v);
    return x / x.norm();
}

inline double condition_number(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    const auto ev = es.eigenvalues().cwiseAbs();
    return ev.maxCoeff() / ev.minCoeff();
}

}  // namespace oracle
