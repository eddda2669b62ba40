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

/**
 * @file
 * Solution verification. A multiplication result is certified exactly by its
 * energy (fidelity = 1 - E). A linear-system result is certified by the
 * spectral-gap bound F >= 1 - kappa^2 E / ||M||^2 together with the residual
 * ratio |<v0|M|phi>|^2 / <phi|M^dag M|phi>.
 */

#pragma once

#include <optional>
#include <span>

#include "vla/estimator.hpp"
#include "vla/problem.hpp"

namespace vla {

inline constexpr double kDefaultFidelityThreshold = 0.99;

/// clamp(1 - E, 0, 1); throws std::out_of_range when E is outside [-tol, 1 + tol].
[[nodiscard]] double fidelity_multiply(double energy, double tol = 1e-8);

/**
 * Raw lower bound 1 - kappa^2 E / scale on the solution fidelity (may be
 * negative). `scale` is ||M||^2 when E was computed with an unnormalized M and
 * 1 when M has unit spectral norm.
 */
[[nodiscard]] double fidelity_bound_solve(double energy, double kappa, double scale = 1.0, double tol = 1e-8);

/// Extreme singular values of M (equal to |eigenvalues| for Hermitian M).
struct Spectrum {
    double kappa = 1.0;  ///< sigma_max / sigma_min
    double norm = 1.0;   ///< sigma_max
};

/// Dense singular-value route (n <= kDenseQubitCap); throws DegenerateProblem when sigma_min < 1e-12.
[[nodiscard]] Spectrum spectrum_of(const PauliSum& m);

/// Metadata when both fields are present, otherwise the dense route.
[[nodiscard]] Spectrum problem_spectrum(const Problem& p);

/// |<v0|M|phi>|^2 / <phi|M^dag M|phi> for the given ansatz point.
double residual_ratio(const Circuit& ansatz, std::span<const double> theta, const Problem& problem,
                      const EstimatorConfig& cfg);

struct VerificationReport {
    Task task = Task::Solve;
    double energy = 0.0;
    double threshold = kDefaultFidelityThreshold;
    /// Certified fidelity: exact for multiply, 0-clamped lower bound for solve.
    double fidelity = 0.0;
    /// Unclamped 1 - kappa^2 E / ||M||^2 (solve only).
    std::optional<double> fidelity_bound_raw;
    std::optional<double> residual_ratio;
    std::optional<double> kappa;
    /// Fidelity against the dense solution, when an oracle run was requested.
    std::optional<double> oracle_fidelity;
    bool passed = false;
};

/// Certifies the state prepared by the estimator's ansatz at theta.
VerificationReport verify(HamiltonianEstimator& estimator, std::span<const double> theta,
                          double threshold = kDefaultFidelityThreshold, bool with_oracle = false);

/// Normalized M|v0> (multiply) or M^-1|v0> (solve) by dense linear algebra.
[[nodiscard]] DenseVector dense_target(const Problem& p);

/// |<phi(theta)|target>|^2 against dense_target().
[[nodiscard]] double oracle_fidelity(const Problem& p, const Circuit& ansatz, std::span<const double> theta);

}  // namespace vla
