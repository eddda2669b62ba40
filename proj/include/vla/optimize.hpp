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
 * Ground-state search: gradient descent with backtracking (VQE), imaginary-time
 * (natural-gradient) steps, Hamiltonian morphing from the identity towards M,
 * and adaptive escalation of the ansatz depth.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vla/estimator.hpp"
#include "vla/problem.hpp"
#include "vla/statevec.hpp"
#include "vla/verify.hpp"

namespace vla {

enum class GradientMethod { Analytic, FiniteDifference };

[[nodiscard]] std::string to_string(GradientMethod m);
[[nodiscard]] GradientMethod gradient_method_from_string(const std::string& name);

struct OptimizerConfig {
    double learning_rate = 0.1;
    std::size_t max_steps = 1000;
    /// Stop once the energy is at or below this value.
    double tolerance = 1e-10;
    double gradient_tolerance = 1e-8;
    GradientMethod gradient = GradientMethod::Analytic;
    double fd_step = kDefaultFdStep;
    /// Extra runs from random angles in [-pi, pi] after the first.
    std::size_t restarts = 0;
    /// Initial angles are uniform in [-init_scale, init_scale].
    double init_scale = 0.05;
    /// Stall: best energy improves by less than stall_delta over stall_window steps.
    std::size_t stall_window = 50;
    double stall_delta = 1e-9;
    /// Halve the learning rate until the energy does not increase.
    bool backtracking = true;
    /// Learning-rate factor applied after every accepted step (1 keeps it fixed).
    double growth = 1.1;
    double max_learning_rate = 10.0;
    /// Tikhonov term added to the metric in imaginary-time steps.
    double metric_regularization = 1e-6;
    bool record_theta = false;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TraceRecord {
    std::size_t step = 0;
    double energy = 0.0;
    double best_energy = 0.0;
    double gradient_norm = 0.0;
    double learning_rate = 0.0;
    double morph_fraction = 1.0;
    std::size_t depth = 0;
    std::vector<double> theta;
};

struct OptTrace {
    std::vector<TraceRecord> records;

    void append(const OptTrace& other);
    /// Columns: step,energy,best_energy,gradient_norm,learning_rate,morph_fraction,depth
    void write_csv(std::ostream& out) const;
};

enum class StopReason { Tolerance, Gradient, Budget, Stall };

[[nodiscard]] std::string to_string(StopReason r);

struct OptResult {
    ParamVector theta;
    double energy = 0.0;
    std::size_t steps = 0;
    StopReason reason = StopReason::Budget;
    OptTrace trace;
};

/// Labels attached to trace records.
struct TraceLabel {
    double morph_fraction = 1.0;
    std::size_t depth = 0;
};

/// theta_{k+1} = theta_k - a grad E(theta_k) with best-seen tracking; throws NumericalFailure on NaN.
OptResult gradient_descent(Objective& objective, std::span<const double> theta0, const OptimizerConfig& cfg,
                           TraceLabel label = {});

/// Gradient descent from theta0, then cfg.restarts runs from random angles; returns the best run.
OptResult vqe_run(Objective& objective, std::span<const double> theta0, const OptimizerConfig& cfg,
                  TraceLabel label = {});

/**
 * One imaginary-time step theta + dtau * thetadot with
 * (G + reg I) thetadot = -V, G_ij = Re <d_i phi|d_j phi>, V_i = Re <d_i phi|H|phi>.
 */
ParamVector ite_step(Objective& objective, std::span<const double> theta, double dtau, double regularization = 1e-6);

/// Repeated ite_step with dtau = cfg.learning_rate (halved when the energy rises).
OptResult ite_run(Objective& objective, std::span<const double> theta0, const OptimizerConfig& cfg,
                  TraceLabel label = {});

struct MorphSchedule {
    double total_time = 20.0;
    std::size_t intervals = 10;
    double dt = 0.1;
    /// Inner steps per interval; 0 derives total_time / (intervals * dt).
    std::size_t steps_per_interval = 0;
    /// Budget of the final optimization at the full matrix.
    std::size_t polish_steps = 20000;
    /// Energy target for the t = 0 anchor.
    double anchor_tolerance = 1e-8;

    /// T = 20 + 10 (n - 1) clamped to [20, 100].
    static MorphSchedule for_qubits(std::size_t n);
    [[nodiscard]] std::size_t inner_steps() const;
    void validate() const;
};

struct MorphResult {
    ParamVector theta;
    /// Final energy for the normalized matrix M / ||M||.
    double energy = 0.0;
    std::size_t steps = 0;
    bool anchored = false;
    /// The final optimization stalled above the target energy.
    bool ansatz_insufficient = false;
    OptTrace trace;
};

/// Energy that certifies `fidelity` for a problem normalized to ||M|| = 1.
[[nodiscard]] double target_energy(Task task, double fidelity, double kappa);

/**
 * Follows the ground state of H(s) built from M(s) = (1 - s) I + s M / ||M||
 * over schedule.intervals equal steps of s, warm-starting each interval from
 * the previous one. At s = 0 the Hamiltonian is I - |v0><v0|, whose ground
 * state is reached from small random angles before the schedule starts. A
 * final optimization at s = 1 continues until the verification target is met.
 */
MorphResult morph_run(const Problem& problem, const Circuit& ansatz, const MorphSchedule& schedule,
                      const OptimizerConfig& cfg, const EstimatorConfig& est,
                      double fidelity_target = kDefaultFidelityThreshold);

struct DepthAttempt {
    std::size_t depth = 0;
    double energy = 0.0;
    double fidelity_bound = 0.0;
    bool success = false;
    std::size_t steps = 0;
    double seconds = 0.0;
};

struct AdaptiveResult {
    bool success = false;
    std::size_t depth = 0;
    ParamVector theta;
    Circuit ansatz;
    VerificationReport verification;
    std::vector<DepthAttempt> attempts;
    OptTrace trace;
};

struct DepthRange {
    std::size_t min_depth = 0;
    std::size_t max_depth = 8;
};

/// Runs morph_run at depth min_depth, min_depth + 1, ... until the verified
/// fidelity reaches `threshold`; on exhaustion returns the best attempt.
AdaptiveResult adaptive_depth_solve(const Problem& problem, const MorphSchedule& schedule, const OptimizerConfig& cfg,
                                    const EstimatorConfig& est, DepthRange range,
                                    double threshold = kDefaultFidelityThreshold,
                                    PrefixPlacement placement = PrefixPlacement::Last);

/// Uniform angles in [-scale, scale].
[[nodiscard]] ParamVector random_angles(std::size_t count, double scale, std::uint64_t seed);

}  // namespace vla
