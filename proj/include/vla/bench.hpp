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
 * Random linear systems with a prescribed condition number and the seeded
 * experiment harness for success-probability and timing sweeps.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "vla/estimator.hpp"
#include "vla/optimize.hpp"
#include "vla/problem.hpp"

namespace vla {

/// Depth of the random circuit that prepares v0 in generated problems.
inline constexpr std::size_t kRandomPrepDepth = 2;

/**
 * Hermitian positive-definite M = Q diag(lambda) Q^dag with lambda = {1, kappa,
 * rest uniform in [1, kappa]} and Q Haar-random, plus a random v0 preparation
 * circuit. Deterministic per seed.
 */
[[nodiscard]] Problem random_problem(std::size_t n, double kappa, std::uint64_t seed, Task task = Task::Solve);

/// Haar-random unitary by QR of a complex Gaussian matrix with the phase fix.
[[nodiscard]] DenseMatrix haar_unitary(Eigen::Index dim, std::uint64_t seed);

/// |lambda|_max / |lambda|_min of a Hermitian Pauli sum (n <= 12); throws DegenerateProblem if singular.
[[nodiscard]] double condition_number(const PauliSum& m);

/// Derives an independent stream seed from a base seed and indices.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

/// Worker count: VLA_THREADS if set, else hardware concurrency.
[[nodiscard]] std::size_t thread_count();

/// Runs fn(0..count-1) on up to `threads` workers; rethrows the first exception.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, std::size_t threads = 0);

struct ExperimentConfig {
    std::vector<std::size_t> qubits{2, 3, 4};
    std::vector<double> kappas{5.0, 10.0};
    /// When set, kappa = kappa_per_qubit * n overrides `kappas`.
    std::optional<double> kappa_per_qubit;
    std::vector<std::size_t> depths{0, 1, 2, 3, 4, 5, 6};
    std::size_t trials = 50;
    std::uint64_t seed = 1;
    double threshold = kDefaultFidelityThreshold;
    /// Skip deeper circuits once a cell reaches all-success.
    bool stop_at_all_success = true;
    PrefixPlacement placement = PrefixPlacement::Last;
    std::optional<MorphSchedule> schedule;  ///< default MorphSchedule::for_qubits(n)
    OptimizerConfig optimizer;
    EstimatorConfig estimator;
    std::size_t threads = 0;
};

struct CellResult {
    std::size_t n = 0;
    double kappa = 1.0;
    std::size_t depth = 0;
    std::size_t trials = 0;
    std::size_t successes = 0;
    double mean_seconds = 0.0;
};

struct ExperimentResult {
    std::vector<CellResult> cells;
    /// Smallest depth with successes == trials per (n, kappa); absent when none.
    std::vector<std::pair<std::pair<std::size_t, double>, std::optional<std::size_t>>> min_depth;
    /// Timing sweep: seconds per solve against matrix size 2^n.
    std::vector<std::pair<std::size_t, double>> timings;
    std::optional<double> fitted_exponent;
    std::optional<double> fitted_prefactor;

    [[nodiscard]] std::optional<std::size_t> min_depth_for(std::size_t n, double kappa) const;
    /// n,kappa,depth,trials,successes,min_depth,mean_seconds
    void write_csv(std::ostream& out, bool include_timing = true) const;
};

/// Fixed-depth morph runs per (n, kappa, depth) cell; success is the dense-oracle fidelity >= threshold.
ExperimentResult success_experiment(const ExperimentConfig& cfg);

/// Wall-clock per solve at each n's minimum successful depth (adaptive search), with a power-law fit.
ExperimentResult timing_experiment(const ExperimentConfig& cfg);

/// Least-squares fit of log y = log a + b log x; returns (a, b) or nothing for fewer than two points.
[[nodiscard]] std::optional<std::pair<double, double>> fit_power_law(const std::vector<std::pair<double, double>>& xy);

}  // namespace vla
