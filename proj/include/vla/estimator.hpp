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
 * Energy, gradient and metric evaluation for the multiplication Hamiltonian
 * H_M = I - M|v0><v0|M^dag / ||M v0||^2 and the linear-system Hamiltonian
 * H = M^dag (I - |v0><v0|) M.
 *
 * Three evaluation modes share one code path per quantity:
 *  - exact: statevector algebra (adjoint-sweep gradients);
 *  - hadamard_exact: every amplitude <0|U|0> is read off the ancilla outcome
 *    probability of a Hadamard-test circuit, computed exactly;
 *  - hadamard_shots: the same circuits sampled with a finite number of shots.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "vla/pauli.hpp"
#include "vla/problem.hpp"
#include "vla/statevec.hpp"

namespace vla {

enum class EstimatorMode { Exact, HadamardExact, HadamardShots };

[[nodiscard]] std::string to_string(EstimatorMode mode);
[[nodiscard]] EstimatorMode estimator_mode_from_string(const std::string& name);

struct EstimatorConfig {
    EstimatorMode mode = EstimatorMode::Exact;
    std::uint64_t shots = 1000;  ///< per Re/Im amplitude estimate in shots mode
    std::uint64_t seed = 0;
    /// Sums with more terms than this are importance-sampled in shots mode.
    std::size_t importance_threshold = 64;

    void validate() const;
};

enum class Part { Real, Imag };

/// A Pauli letter inserted right after gate `gate_index` of a circuit.
struct Insertion {
    std::size_t gate_index;
    char letter;
};

/// One side of an overlap <0| L^dag sigma R |0>: a circuit at parameters theta,
/// optionally with a Pauli letter inserted after one of its gates.
struct Arm {
    const Circuit* circuit = nullptr;
    std::span<const double> theta;
    std::optional<Insertion> insertion;

    [[nodiscard]] StateVector state() const;
};

/**
 * Hadamard test for Re or Im of e^{i phase} <0| L^dag sigma R |0>.
 *
 * The ancilla starts in (|0> + e^{i phi}|1>)/sqrt(2) with phi = phase for the
 * real part and phase - pi/2 for the imaginary part; the controlled unitary is
 * R, then sigma, then L^dag. The estimate is the +/-1 mean of the ancilla
 * X-basis outcome. Exact mode skips the ancilla and returns the overlap part.
 */
double hadamard_test(const Arm& left, std::string_view sigma, const Arm& right, Part part,
                     const EstimatorConfig& cfg, std::mt19937_64& rng, double phase = 0.0);

/// Estimate of sum_j lambda_j <0| L^dag sigma_j R |0> with its standard error.
struct SumEstimate {
    Complex value;
    double standard_error = 0.0;
    std::size_t circuit_evaluations = 0;
};

SumEstimate estimate_weighted_sum(const Arm& left, const PauliSum& ops, const Arm& right, const EstimatorConfig& cfg,
                                  std::mt19937_64& rng);

struct EnergyReport {
    double value = 0.0;
    double standard_error = 0.0;
    EstimatorMode mode = EstimatorMode::Exact;
    std::uint64_t shots = 0;
    /// Named composite amplitudes the energy was assembled from.
    std::vector<std::pair<std::string, Complex>> amplitudes;
};

/// Minimization target shared by all optimizers.
class Objective {
  public:
    virtual ~Objective() = default;
    [[nodiscard]] virtual std::size_t parameter_count() const = 0;
    virtual EnergyReport evaluate(std::span<const double> theta) = 0;
    double energy(std::span<const double> theta) { return evaluate(theta).value; }
    /// Analytic gradient dE/dtheta.
    virtual std::vector<double> gradient(std::span<const double> theta) = 0;
    /// Re <d_i phi | d_j phi>.
    virtual Eigen::MatrixXd metric(std::span<const double> theta) = 0;
    /// Amplitude (circuit) evaluations performed so far.
    [[nodiscard]] virtual std::size_t evaluations() const = 0;
};

/// Shared machinery for Hamiltonian objectives over one ansatz circuit.
class HamiltonianEstimator : public Objective {
  public:
    HamiltonianEstimator(Problem problem, Circuit ansatz, EstimatorConfig cfg);

    [[nodiscard]] std::size_t parameter_count() const override { return ansatz_.parameter_count(); }
    Eigen::MatrixXd metric(std::span<const double> theta) override;
    [[nodiscard]] std::size_t evaluations() const override { return evaluations_; }

    [[nodiscard]] const Problem& problem() const noexcept { return problem_; }
    [[nodiscard]] const Circuit& ansatz() const noexcept { return ansatz_; }
    [[nodiscard]] const EstimatorConfig& config() const noexcept { return cfg_; }

    /// sum_j lambda_j <phi(theta)| sigma_j |v0> = <phi|M|v0>.
    SumEstimate transition_amplitude(std::span<const double> theta);

  protected:
    void check_theta(std::span<const double> theta) const;
    [[nodiscard]] Arm ansatz_arm(std::span<const double> theta, std::optional<Insertion> ins = {}) const;
    [[nodiscard]] Arm prefix_arm() const;
    SumEstimate sum(const Arm& left, const PauliSum& ops, const Arm& right);
    /// Gradient 2 Re <d_i phi| h> given h = H|phi>, by one reverse sweep.
    [[nodiscard]] std::vector<double> adjoint_gradient(std::span<const double> theta, const StateVector& phi,
                                                       const StateVector& h) const;
    /// For every slot i: sum_s conj(f_i^s) * g(insertion) accumulated per slot.
    std::vector<Complex> derivative_sum(std::span<const double> theta,
                                        const std::function<Complex(const Insertion&)>& g) const;

    Problem problem_;
    Circuit ansatz_;
    EstimatorConfig cfg_;
    std::mt19937_64 rng_;
    std::size_t evaluations_ = 0;
    std::optional<DenseMatrix> dense_;  ///< M, exact mode only
    StateVector v0_;
};

/// E_M(theta) = 1 - |<phi|M|v0>|^2 / ||M v0||^2.
class MultiplyEstimator final : public HamiltonianEstimator {
  public:
    MultiplyEstimator(Problem problem, Circuit ansatz, EstimatorConfig cfg);

    EnergyReport evaluate(std::span<const double> theta) override;
    std::vector<double> gradient(std::span<const double> theta) override;

    /// ||M v0||^2: exact in exact mode, otherwise estimated once from
    /// sum_l beta_l <v0|sigma_l|v0> over the Pauli form of M^dag M.
    [[nodiscard]] double normalizer() const noexcept { return normalizer_; }
    /// |<phi|v_M>|^2 by direct state overlap (exact route, for verification).
    [[nodiscard]] double exact_fidelity(std::span<const double> theta) const;

  private:
    double normalizer_ = 0.0;
    StateVector target_;  ///< M|v0>, exact mode
};

/// E(theta) = <phi|M^dag M|phi> - |<v0|M|phi>|^2.
class SolveEstimator final : public HamiltonianEstimator {
  public:
    SolveEstimator(Problem problem, Circuit ansatz, EstimatorConfig cfg);

    EnergyReport evaluate(std::span<const double> theta) override;
    std::vector<double> gradient(std::span<const double> theta) override;

    /// |<v0|M|phi>|^2 / <phi|M^dag M|phi>.
    double residual_ratio(std::span<const double> theta);
    [[nodiscard]] const PauliSum& gram() const noexcept { return gram_; }

  private:
    PauliSum gram_;  ///< canonical M^dag M
};

/// Symbolic M^dag M, canonicalized; throws when it exceeds `max_terms`.
[[nodiscard]] PauliSum gram_sum(const PauliSum& m, std::size_t max_terms = 4096);

std::unique_ptr<HamiltonianEstimator> make_estimator(const Problem& problem, const Circuit& ansatz,
                                                     const EstimatorConfig& cfg);

// Free-function forms.
SumEstimate transition_amplitude(const Circuit& ansatz, std::span<const double> theta, const PauliSum& p,
                                 const Circuit& v0_prep, const EstimatorConfig& cfg);
EnergyReport energy_multiply(const Circuit& ansatz, std::span<const double> theta, const Problem& problem,
                             const EstimatorConfig& cfg);
EnergyReport energy_solve(const Circuit& ansatz, std::span<const double> theta, const Problem& problem,
                          const EstimatorConfig& cfg);
std::vector<double> grad_analytic_multiply(const Circuit& ansatz, std::span<const double> theta,
                                           const Problem& problem, const EstimatorConfig& cfg);
std::vector<double> grad_analytic_solve(const Circuit& ansatz, std::span<const double> theta, const Problem& problem,
                                        const EstimatorConfig& cfg);

inline constexpr double kDefaultFdStep = 1e-3;

/// Central differences (E(theta + d e_i) - E(theta - d e_i)) / 2d.
std::vector<double> grad_fd(std::span<const double> theta, const std::function<double(std::span<const double>)>& energy,
                            double step = kDefaultFdStep);

}  // namespace vla
