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

#include "vla/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vla {

double fidelity_multiply(double energy, double tol) {
    if (!(energy >= -tol && energy <= 1.0 + tol)) {
        throw std::out_of_range("multiplication energy " + std::to_string(energy) + " outside [0, 1]");
    }
    return std::clamp(1.0 - energy, 0.0, 1.0);
}

double fidelity_bound_solve(double energy, double kappa, double scale, double tol) {
    if (!(kappa >= 1.0)) throw std::invalid_argument("condition number must be >= 1");
    if (!(scale > 0.0)) throw std::invalid_argument("bound scale must be positive");
    if (!(energy >= -tol)) throw std::out_of_range("linear-system energy is negative beyond tolerance");
    return 1.0 - kappa * kappa * std::max(energy, 0.0) / scale;
}

Spectrum spectrum_of(const PauliSum& m) {
    const DenseMatrix d = pauli_to_matrix(m);
    const Eigen::JacobiSVD<DenseMatrix> svd(d);
    const auto& s = svd.singularValues();
    const double smax = s.maxCoeff();
    const double smin = s.minCoeff();
    if (smin < 1e-12) throw DegenerateProblem("matrix is singular (smallest singular value below 1e-12)");
    return {smax / smin, smax};
}

Spectrum problem_spectrum(const Problem& p) {
    if (p.metadata.kappa && p.metadata.spectral_norm) return {*p.metadata.kappa, *p.metadata.spectral_norm};
    return spectrum_of(p.matrix);
}

double residual_ratio(const Circuit& ansatz, std::span<const double> theta, const Problem& problem,
                      const EstimatorConfig& cfg) {
    return SolveEstimator(problem, ansatz, cfg).residual_ratio(theta);
}

DenseVector dense_target(const Problem& p) {
    const DenseMatrix m = pauli_to_matrix(p.matrix);
    const DenseVector v = p.v0().to_eigen();
    DenseVector x = p.task == Task::Multiply ? DenseVector(m * v) : DenseVector(m.fullPivLu().solve(v));
    const double n = x.norm();
    if (!(n > 1e-12)) throw DegenerateProblem("target state vanishes");
    return x / n;
}

double oracle_fidelity(const Problem& p, const Circuit& ansatz, std::span<const double> theta) {
    const DenseVector phi = prepare_state(ansatz, theta).to_eigen();
    return std::norm(phi.dot(dense_target(p)));
}

VerificationReport verify(HamiltonianEstimator& estimator, std::span<const double> theta, double threshold,
                          bool with_oracle) {
    const Problem& p = estimator.problem();
    VerificationReport r;
    r.task = p.task;
    r.threshold = threshold;
    const EnergyReport e = estimator.evaluate(theta);
    r.energy = e.value;
    // Statistical estimates may dip below zero; allow a few standard errors.
    const double tol = std::max(1e-8, 4.0 * e.standard_error);
    if (p.task == Task::Multiply) {
        r.fidelity = std::clamp(1.0 - e.value, 0.0, 1.0);
        if (e.value < -tol || e.value > 1.0 + tol) throw std::out_of_range("multiplication energy outside [0, 1]");
    } else {
        const Spectrum s = problem_spectrum(p);
        r.kappa = s.kappa;
        const double raw = fidelity_bound_solve(e.value, s.kappa, s.norm * s.norm, tol);
        r.fidelity_bound_raw = raw;
        r.fidelity = std::clamp(raw, 0.0, 1.0);
        const double denom = e.amplitudes.at(0).second.real();
        if (denom >= 1e-12) r.residual_ratio = std::norm(e.amplitudes.at(1).second) / denom;
    }
    if (with_oracle) r.oracle_fidelity = oracle_fidelity(p, estimator.ansatz(), theta);
    r.passed = r.fidelity >= threshold;
    return r;
}

}  // namespace vla
