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
 * Time evolution through repeated variational matrix-vector multiplication.
 * Each step prepares |phi(theta')> ~ M |phi(theta)> with M = 1 - i H dt (real
 * time), 1 - H dtau (imaginary time) or a jump operator L_k, warm-starting
 * theta' at theta on a fixed circuit.
 */

#pragma once

#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vla/estimator.hpp"
#include "vla/optimize.hpp"

namespace vla {

/// A step whose variational solution stays below the required fidelity.
class StepFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct EvolutionSpec {
    PauliSum hamiltonian;
    double total_time = 1.0;
    double dt = 0.01;
    std::vector<PauliSum> jumps;
    /// Per-step optimizer; its tolerance is overridden by the rule below.
    OptimizerConfig optimizer;
    /// A step stops once E <= max(relative_tolerance * E(theta_prev), absolute_tolerance).
    double relative_tolerance = 1e-3;
    double absolute_tolerance = 1e-14;
    /// A step fails when 1 - E falls below this.
    double step_fidelity_min = 0.999;
    /// Compare against the dense propagator at every step (n <= 12).
    bool track_exact = true;

    [[nodiscard]] std::size_t qubit_count() const noexcept { return hamiltonian.qubit_count(); }
    [[nodiscard]] std::size_t step_count() const;
    void validate() const;
};

struct StepRecord {
    double time = 0.0;
    double energy = 0.0;
    /// 1 - E of the step's multiplication problem.
    double step_fidelity = 1.0;
    /// Fidelity against the dense reference evolution, when tracked.
    std::optional<double> exact_fidelity;
    /// |<phi_k| U(dt) |phi_{k-1}>|^2 with the exact one-step propagator U, when tracked.
    std::optional<double> local_fidelity;
    bool jump = false;
    std::optional<std::size_t> channel;
    std::size_t optimizer_steps = 0;
    std::size_t evaluations = 0;
};

struct TrajectoryRecord {
    std::vector<StepRecord> steps;
    /// thetas[0] is the initial point, thetas[k] the point after step k.
    std::vector<ParamVector> thetas;

    [[nodiscard]] std::vector<double> jump_times() const;
    /// Sum of per-step infidelities 1 - local_fidelity (tracked runs only).
    [[nodiscard]] double accumulated_infidelity() const;
    /// Columns: t,fidelity,jump_flag,channel,energy,evaluations
    void write_csv(std::ostream& out) const;
    [[nodiscard]] std::string summary_json() const;
};

/// Real-time steps with M = 1 - i H dt.
TrajectoryRecord real_time_evolve(const EvolutionSpec& spec, const Circuit& ansatz, std::span<const double> theta0);

/// Imaginary-time steps with M = 1 - H dtau (normalization is implicit).
TrajectoryRecord imag_time_evolve(const EvolutionSpec& spec, const Circuit& ansatz, std::span<const double> theta0);

/**
 * theta' with |phi(theta')> ~ L|phi(theta)>. Warm-starts at theta and falls
 * back to random restarts when that point is stationary. Throws
 * DegenerateProblem when ||L phi|| < 1e-10 and StepFailure when the result
 * cannot be certified at `fidelity_min`.
 */
ParamVector quantum_jump_apply(const Circuit& ansatz, std::span<const double> theta, const PauliSum& jump,
                               const OptimizerConfig& cfg, double fidelity_min = kDefaultFidelityThreshold);

/**
 * One stochastic trajectory: per step, jump channel k fires with probability
 * <L_k^dag L_k> dt, otherwise the state drifts with
 * M = 1 - i H dt - (1/2) sum_k L_k^dag L_k dt (renormalized).
 */
TrajectoryRecord trajectory_run(const EvolutionSpec& spec, const Circuit& ansatz, std::span<const double> theta0,
                                std::mt19937_64& rng);

/// exp(-i H t) psi (or exp(-H t) psi normalized when imaginary), dense.
[[nodiscard]] DenseVector dense_evolve(const PauliSum& h, const DenseVector& psi, double t, bool imaginary = false);

}  // namespace vla
