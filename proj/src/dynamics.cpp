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

#include "vla/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "vla/verify.hpp"

namespace vla {

namespace {

Problem step_problem(PauliSum m, const Circuit& ansatz, std::span<const double> theta) {
    ProblemMetadata meta;
    meta.allow_non_hermitian = true;
    return Problem{Task::Multiply, std::move(m), ansatz.bind(theta), meta};
}

struct StepOutcome {
    ParamVector theta;
    double energy = 0.0;
    std::size_t steps = 0;
    std::size_t evaluations = 0;
};

StepOutcome multiply_step(const EvolutionSpec& spec, const PauliSum& m, const Circuit& ansatz,
                          std::span<const double> theta) {
    MultiplyEstimator f(step_problem(m, ansatz, theta), ansatz, EstimatorConfig{});
    const double e0 = f.energy(theta);
    OptimizerConfig c = spec.optimizer;
    c.tolerance = std::max(spec.relative_tolerance * e0, spec.absolute_tolerance);
    const OptResult r = gradient_descent(f, theta, c);
    if (1.0 - r.energy < spec.step_fidelity_min) {
        throw StepFailure("variational step reached fidelity " + std::to_string(1.0 - r.energy) + " below " +
                          std::to_string(spec.step_fidelity_min) + " (energy " + std::to_string(r.energy) +
                          " after " + std::to_string(r.steps) + " steps, stop: " + to_string(r.reason) + ")");
    }
    return {r.theta, r.energy, r.steps, f.evaluations()};
}

PauliSum shifted(const PauliSum& h, Complex factor) {
    PauliSum m = PauliSum::identity(h.qubit_count());
    m += h.scaled(factor);
    return canonicalize(m);
}

TrajectoryRecord evolve(const EvolutionSpec& spec, const Circuit& ansatz, std::span<const double> theta0,
                        bool imaginary) {
    spec.validate();
    if (ansatz.qubit_count() != spec.qubit_count()) throw std::invalid_argument("ansatz and Hamiltonian differ in size");
    if (theta0.size() != ansatz.parameter_count()) throw std::invalid_argument("initial parameter length mismatch");
    const PauliSum m = shifted(spec.hamiltonian, imaginary ? Complex(-spec.dt, 0.0) : Complex(0.0, -spec.dt));
    const bool exact = spec.track_exact && spec.qubit_count() <= kDenseQubitCap;
    const DenseVector psi0 = prepare_state(ansatz, theta0).to_eigen();

    TrajectoryRecord rec;
    rec.thetas.emplace_back(theta0.begin(), theta0.end());
    const std::size_t steps = spec.step_count();
    for (std::size_t k = 1; k <= steps; ++k) {
        StepOutcome o = multiply_step(spec, m, ansatz, rec.thetas.back());
        StepRecord s;
        s.time = static_cast<double>(k) * spec.dt;
        s.energy = o.energy;
        s.step_fidelity = 1.0 - o.energy;
        s.optimizer_steps = o.steps;
        s.evaluations = o.evaluations;
        if (exact) {
            const DenseVector ref = dense_evolve(spec.hamiltonian, psi0, s.time, imaginary);
            const DenseVector phi = prepare_state(ansatz, o.theta).to_eigen();
            s.exact_fidelity = std::norm(phi.dot(ref));
            const DenseVector prev = prepare_state(ansatz, rec.thetas.back()).to_eigen();
            s.local_fidelity = std::norm(phi.dot(dense_evolve(spec.hamiltonian, prev, spec.dt, imaginary)));
        }
        rec.steps.push_back(s);
        rec.thetas.push_back(std::move(o.theta));
    }
    return rec;
}

}  // namespace

std::size_t EvolutionSpec::step_count() const {
    return static_cast<std::size_t>(std::llround(total_time / dt));
}

void EvolutionSpec::validate() const {
    if (hamiltonian.qubit_count() == 0) throw std::invalid_argument("evolution needs a Hamiltonian");
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (!(total_time >= 0.0)) throw std::invalid_argument("total time must be non-negative");
    if (std::abs(static_cast<double>(step_count()) * dt - total_time) > 1e-9 * std::max(1.0, total_time)) {
        throw std::invalid_argument("total time must be an integer multiple of the time step");
    }
    if (!hamiltonian.empty() && !hamiltonian.is_hermitian(1e-10)) {
        throw std::invalid_argument("Hamiltonian must be Hermitian (real Pauli coefficients)");
    }
    for (const auto& l : jumps) {
        if (l.qubit_count() != hamiltonian.qubit_count()) throw std::invalid_argument("jump operator size mismatch");
    }
    if (!(relative_tolerance > 0.0 && absolute_tolerance > 0.0)) throw std::invalid_argument("step tolerances must be positive");
    if (hamiltonian.one_norm() * dt > 0.1) {
        std::cerr << "warning: ||H|| dt = " << hamiltonian.one_norm() * dt
                  << " exceeds 0.1; first-order steps may be inaccurate\n";
    }
}

std::vector<double> TrajectoryRecord::jump_times() const {
    std::vector<double> t;
    for (const auto& s : steps)
        if (s.jump) t.push_back(s.time);
    return t;
}

double TrajectoryRecord::accumulated_infidelity() const {
    double acc = 0.0;
    for (const auto& s : steps)
        if (s.local_fidelity) acc += 1.0 - *s.local_fidelity;
    return acc;
}

void TrajectoryRecord::write_csv(std::ostream& out) const {
    out << "t,fidelity,jump_flag,channel,energy,evaluations\n";
    const auto old = out.precision(17);
    for (const auto& s : steps) {
        out << s.time << ',';
        if (s.exact_fidelity) out << *s.exact_fidelity;
        else out << s.step_fidelity;
        out << ',' << (s.jump ? 1 : 0) << ',';
        if (s.channel) out << *s.channel;
        out << ',' << s.energy << ',' << s.evaluations << '\n';
    }
    out.precision(old);
}

std::string TrajectoryRecord::summary_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["steps"] = steps.size();
    j["final_time"] = steps.empty() ? 0.0 : steps.back().time;
    j["jump_times"] = jump_times();
    double min_step = 1.0;
    std::size_t evals = 0;
    for (const auto& s : steps) {
        min_step = std::min(min_step, s.step_fidelity);
        evals += s.evaluations;
    }
    j["min_step_fidelity"] = min_step;
    j["amplitude_evaluations"] = evals;
    if (!steps.empty() && steps.back().exact_fidelity) {
        j["final_exact_fidelity"] = *steps.back().exact_fidelity;
        j["accumulated_infidelity"] = accumulated_infidelity();
    }
    if (!thetas.empty()) j["theta"] = thetas.back();
    return j.dump(2);
}

DenseVector dense_evolve(const PauliSum& h, const DenseVector& psi, double t, bool imaginary) {
    const Eigen::SelfAdjointEigenSolver<DenseMatrix> es(pauli_to_matrix(h));
    const Eigen::VectorXd& ev = es.eigenvalues();
    const DenseMatrix& v = es.eigenvectors();
    DenseVector c = v.adjoint() * psi;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        c(i) *= imaginary ? Complex(std::exp(-(ev(i) - ev.minCoeff()) * t), 0.0) : std::polar(1.0, -ev(i) * t);
    }
    DenseVector out = v * c;
    if (imaginary) out /= out.norm();
    return out;
}

TrajectoryRecord real_time_evolve(const EvolutionSpec& spec, const Circuit& ansatz, std::span<const double> theta0) {
    return evolve(spec, ansatz, theta0, false);
}

TrajectoryRecord imag_time_evolve(const EvolutionSpec& spec, const Circuit& ansatz, std::span<const double> theta0) {
    return evolve(spec, ansatz, theta0, true);
}

ParamVector quantum_jump_apply(const Circuit& ansatz, std::span<const double> theta, const PauliSum& jump,
                               const OptimizerConfig& cfg, double fidelity_min) {
    const StateVector phi = prepare_state(ansatz, theta);
    const StateVector l_phi = apply_pauli_sum(phi, jump);
    if (l_phi.norm() < 1e-10) throw DegenerateProblem("jump operator annihilates the state");
    MultiplyEstimator f(step_problem(jump, ansatz, theta), ansatz, EstimatorConfig{});
    OptimizerConfig c = cfg;
    c.tolerance = std::min(cfg.tolerance, 1e-10);
    c.max_steps = std::max<std::size_t>(cfg.max_steps, 2000);
    c.restarts = std::max<std::size_t>(cfg.restarts, 8);
    const OptResult r = vqe_run(f, theta, c);
    if (1.0 - r.energy < fidelity_min) {
        throw StepFailure("jump could not be represented: fidelity " + std::to_string(1.0 - r.energy));
    }
    return r.theta;
}

TrajectoryRecord trajectory_run(const EvolutionSpec& spec, const Circuit& ansatz, std::span<const double> theta0,
                                std::mt19937_64& rng) {
    spec.validate();
    if (ansatz.qubit_count() != spec.qubit_count()) throw std::invalid_argument("ansatz and Hamiltonian differ in size");
    const std::size_t n = spec.qubit_count();
    PauliSum decay(n);
    for (const auto& l : spec.jumps) decay += canonicalize(l.adjoint() * l);
    PauliSum drift = PauliSum::identity(n);
    if (!spec.hamiltonian.empty()) drift += spec.hamiltonian.scaled(Complex(0.0, -spec.dt));
    if (!decay.empty()) drift += decay.scaled(Complex(-0.5 * spec.dt, 0.0));
    drift = canonicalize(drift);

    std::uniform_real_distribution<double> u(0.0, 1.0);
    TrajectoryRecord rec;
    rec.thetas.emplace_back(theta0.begin(), theta0.end());
    const std::size_t steps = spec.step_count();
    for (std::size_t k = 1; k <= steps; ++k) {
        const ParamVector& theta = rec.thetas.back();
        const StateVector phi = prepare_state(ansatz, theta);
        std::vector<double> p(spec.jumps.size());
        double total = 0.0;
        for (std::size_t j = 0; j < spec.jumps.size(); ++j) {
            const double w = apply_pauli_sum(phi, spec.jumps[j]).norm();
            p[j] = w * w * spec.dt;
            total += p[j];
        }
        if (total > 1.0) throw std::invalid_argument("jump probabilities exceed 1; reduce the time step");
        StepRecord s;
        s.time = static_cast<double>(k) * spec.dt;
        double x = u(rng);
        if (x < total) {
            std::size_t j = 0;
            while (j + 1 < p.size() && x >= p[j]) x -= p[j++];
            s.jump = true;
            s.channel = j;
            rec.thetas.push_back(quantum_jump_apply(ansatz, theta, spec.jumps[j], spec.optimizer));
        } else {
            StepOutcome o = multiply_step(spec, drift, ansatz, theta);
            s.energy = o.energy;
            s.step_fidelity = 1.0 - o.energy;
            s.optimizer_steps = o.steps;
            s.evaluations = o.evaluations;
            rec.thetas.push_back(std::move(o.theta));
        }
        rec.steps.push_back(s);
    }
    return rec;
}

}  // namespace vla
