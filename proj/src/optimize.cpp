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

#include "vla/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace vla {

namespace {

double norm2(const std::vector<double>& g) {
    double s = 0.0;
    for (double x : g) s += x * x;
    return std::sqrt(s);
}

std::vector<double> gradient_of(Objective& f, std::span<const double> theta, const OptimizerConfig& cfg) {
    if (cfg.gradient == GradientMethod::Analytic) return f.gradient(theta);
    return grad_fd(theta, [&](std::span<const double> t) { return f.energy(t); }, cfg.fd_step);
}

double checked_energy(Objective& f, std::span<const double> theta) {
    const double e = f.energy(theta);
    if (!std::isfinite(e)) throw NumericalFailure("energy evaluated to a non-finite value");
    return e;
}

// Best energy over the last `window` trace records did not improve by `delta`.
bool stalled(const std::vector<double>& best, std::size_t window, double delta) {
    if (window == 0 || best.size() <= window) return false;
    return best[best.size() - 1 - window] - best.back() < delta;
}

double spectral_norm(const Problem& p) {
    if (p.metadata.spectral_norm) return *p.metadata.spectral_norm;
    const Eigen::JacobiSVD<DenseMatrix> svd(pauli_to_matrix(p.matrix));
    const double s = svd.singularValues().maxCoeff();
    if (!(s > 0.0)) throw DegenerateProblem("matrix is zero");
    return s;
}

Problem with_matrix(const Problem& p, PauliSum m) {
    ProblemMetadata meta = p.metadata;
    meta.spectral_norm.reset();
    meta.kappa.reset();
    meta.allow_non_hermitian = true;
    return Problem{p.task, std::move(m), p.v0_prep, meta};
}

}  // namespace

std::string to_string(GradientMethod m) { return m == GradientMethod::Analytic ? "analytic" : "fd"; }

GradientMethod gradient_method_from_string(const std::string& name) {
    if (name == "analytic") return GradientMethod::Analytic;
    if (name == "fd") return GradientMethod::FiniteDifference;
    throw std::invalid_argument("unknown gradient method '" + name + "'");
}

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::Tolerance: return "tolerance";
        case StopReason::Gradient: return "gradient";
        case StopReason::Budget: return "budget";
        case StopReason::Stall: return "stall";
    }
    return "?";
}

void OptimizerConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (!(tolerance > 0.0)) throw std::invalid_argument("energy tolerance must be positive");
    if (!(gradient_tolerance >= 0.0)) throw std::invalid_argument("gradient tolerance must be non-negative");
    if (!(fd_step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    if (!(init_scale >= 0.0)) throw std::invalid_argument("initial-angle scale must be non-negative");
    if (!(growth >= 1.0)) throw std::invalid_argument("learning-rate growth must be >= 1");
    if (!(max_learning_rate >= learning_rate)) throw std::invalid_argument("max learning rate below learning rate");
    if (!(metric_regularization >= 0.0)) throw std::invalid_argument("metric regularization must be >= 0");
}

void OptTrace::append(const OptTrace& other) {
    const std::size_t offset = records.empty() ? 0 : records.back().step + 1;
    for (TraceRecord r : other.records) {
        r.step += offset;
        records.push_back(std::move(r));
    }
}

void OptTrace::write_csv(std::ostream& out) const {
    out << "step,energy,best_energy,gradient_norm,learning_rate,morph_fraction,depth\n";
    const auto old = out.precision(17);
    for (const auto& r : records) {
        out << r.step << ',' << r.energy << ',' << r.best_energy << ',' << r.gradient_norm << ',' << r.learning_rate
            << ',' << r.morph_fraction << ',' << r.depth << '\n';
    }
    out.precision(old);
}

ParamVector random_angles(std::size_t count, double scale, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    ParamVector t(count);
    for (auto& x : t) x = u(rng);
    return t;
}

OptResult gradient_descent(Objective& f, std::span<const double> theta0, const OptimizerConfig& cfg,
                           TraceLabel label) {
    cfg.validate();
    if (theta0.size() != f.parameter_count()) throw std::invalid_argument("initial parameter vector length mismatch");
    OptResult out;
    ParamVector theta(theta0.begin(), theta0.end());
    double e = checked_energy(f, theta);
    double lr = cfg.learning_rate;
    out.theta = theta;
    out.energy = e;
    std::vector<double> best_hist;
    std::size_t step = 0;
    for (;; ++step) {
        if (e <= cfg.tolerance) {
            out.reason = StopReason::Tolerance;
            break;
        }
        if (step >= cfg.max_steps) {
            out.reason = StopReason::Budget;
            break;
        }
        const std::vector<double> g = gradient_of(f, theta, cfg);
        const double gn = norm2(g);
        if (!std::isfinite(gn)) throw NumericalFailure("gradient evaluated to a non-finite value");
        best_hist.push_back(out.energy);
        out.trace.records.push_back({step, e, out.energy, gn, lr, label.morph_fraction, label.depth,
                                     cfg.record_theta ? theta : std::vector<double>{}});
        if (gn < cfg.gradient_tolerance) {
            out.reason = StopReason::Gradient;
            break;
        }
        if (stalled(best_hist, cfg.stall_window, cfg.stall_delta)) {
            out.reason = StopReason::Stall;
            break;
        }
        ParamVector next(theta.size());
        double e_next = e;
        bool accepted = false;
        for (int tries = 0; tries < 60; ++tries) {
            for (std::size_t i = 0; i < theta.size(); ++i) next[i] = theta[i] - lr * g[i];
            e_next = checked_energy(f, next);
            if (!cfg.backtracking || e_next <= e) {
                accepted = true;
                break;
            }
            lr *= 0.5;
        }
        if (!accepted) {
            out.reason = StopReason::Stall;
            break;
        }
        theta.swap(next);
        e = e_next;
        lr = std::min(lr * cfg.growth, cfg.max_learning_rate);
        if (e < out.energy) {
            out.energy = e;
            out.theta = theta;
        }
    }
    out.steps = step;
    return out;
}

OptResult vqe_run(Objective& f, std::span<const double> theta0, const OptimizerConfig& cfg, TraceLabel label) {
    OptResult best = gradient_descent(f, theta0, cfg, label);
    OptTrace all = best.trace;
    std::size_t steps = best.steps;
    for (std::size_t r = 1; r <= cfg.restarts && best.energy > cfg.tolerance; ++r) {
        const ParamVector start = random_angles(f.parameter_count(), std::numbers::pi, cfg.seed + 7919 * r);
        OptResult run = gradient_descent(f, start, cfg, label);
        all.append(run.trace);
        steps += run.steps;
        if (run.energy < best.energy) best = std::move(run);
    }
    best.trace = std::move(all);
    best.steps = steps;
    return best;
}

ParamVector ite_step(Objective& f, std::span<const double> theta, double dtau, double regularization) {
    if (!(dtau > 0.0)) throw std::invalid_argument("imaginary-time step must be positive");
    const auto l = static_cast<Eigen::Index>(theta.size());
    Eigen::MatrixXd g = f.metric(theta);
    g.diagonal().array() += regularization;
    const std::vector<double> grad = f.gradient(theta);
    Eigen::VectorXd v(l);
    for (Eigen::Index i = 0; i < l; ++i) v(i) = 0.5 * grad[static_cast<std::size_t>(i)];
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-14)) {
        throw NumericalFailure("metric tensor is singular beyond regularization");
    }
    const Eigen::VectorXd rate = -ldlt.solve(v);
    if (!rate.allFinite()) throw NumericalFailure("imaginary-time update is not finite");
    ParamVector out(theta.begin(), theta.end());
    for (Eigen::Index i = 0; i < l; ++i) out[static_cast<std::size_t>(i)] += dtau * rate(i);
    return out;
}

OptResult ite_run(Objective& f, std::span<const double> theta0, const OptimizerConfig& cfg, TraceLabel label) {
    cfg.validate();
    OptResult out;
    ParamVector theta(theta0.begin(), theta0.end());
    double e = checked_energy(f, theta);
    double dtau = cfg.learning_rate;
    out.theta = theta;
    out.energy = e;
    std::vector<double> best_hist;
    std::size_t step = 0;
    for (;; ++step) {
        if (e <= cfg.tolerance) {
            out.reason = StopReason::Tolerance;
            break;
        }
        if (step >= cfg.max_steps) {
            out.reason = StopReason::Budget;
            break;
        }
        best_hist.push_back(out.energy);
        out.trace.records.push_back({step, e, out.energy, 0.0, dtau, label.morph_fraction, label.depth,
                                     cfg.record_theta ? theta : std::vector<double>{}});
        if (stalled(best_hist, cfg.stall_window, cfg.stall_delta)) {
            out.reason = StopReason::Stall;
            break;
        }
        ParamVector next;
        double e_next = e;
        bool accepted = false;
        for (int tries = 0; tries < 40; ++tries) {
            next = ite_step(f, theta, dtau, cfg.metric_regularization);
            e_next = checked_energy(f, next);
            if (!cfg.backtracking || e_next <= e) {
                accepted = true;
                break;
            }
            dtau *= 0.5;
        }
        if (!accepted) {
            out.reason = StopReason::Stall;
            break;
        }
        theta.swap(next);
        e = e_next;
        dtau = std::min(dtau * cfg.growth, cfg.max_learning_rate);
        if (e < out.energy) {
            out.energy = e;
            out.theta = theta;
        }
    }
    out.steps = step;
    return out;
}

MorphSchedule MorphSchedule::for_qubits(std::size_t n) {
    MorphSchedule s;
    s.total_time = std::clamp(20.0 + 10.0 * (static_cast<double>(n) - 1.0), 20.0, 100.0);
    return s;
}

std::size_t MorphSchedule::inner_steps() const {
    if (steps_per_interval > 0) return steps_per_interval;
    return static_cast<std::size_t>(std::ceil(total_time / (static_cast<double>(intervals) * dt) - 1e-9));
}

void MorphSchedule::validate() const {
    if (intervals < 1) throw std::invalid_argument("morph schedule needs at least one interval");
    if (!(total_time > 0.0)) throw std::invalid_argument("morph total time must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("morph step size must be positive");
    if (!(anchor_tolerance > 0.0)) throw std::invalid_argument("anchor tolerance must be positive");
}

double target_energy(Task task, double fidelity, double kappa) {
    if (!(fidelity > 0.0 && fidelity <= 1.0)) throw std::invalid_argument("fidelity target must lie in (0, 1]");
    const double slack = std::max(1.0 - fidelity, 1e-15);
    if (task == Task::Multiply) return slack;
    return slack / (kappa * kappa);
}

MorphResult morph_run(const Problem& problem, const Circuit& ansatz, const MorphSchedule& schedule,
                      const OptimizerConfig& cfg, const EstimatorConfig& est, double fidelity_target) {
    schedule.validate();
    cfg.validate();
    if (ansatz.qubit_count() != problem.qubit_count()) throw std::invalid_argument("ansatz and problem differ in size");
    const std::size_t n = problem.qubit_count();
    const double scale = spectral_norm(problem);
    const PauliSum normalized = canonicalize(problem.matrix.scaled(1.0 / scale));
    const double kappa = problem.task == Task::Solve ? problem_spectrum(problem).kappa : 1.0;

    MorphResult out;
    ParamVector theta = random_angles(ansatz.parameter_count(), cfg.init_scale, cfg.seed);

    // s = 0: H = I - |v0><v0| for either task.
    {
        auto f = make_estimator(with_matrix(problem, PauliSum::identity(n)), ansatz, est);
        OptimizerConfig c = cfg;
        c.tolerance = schedule.anchor_tolerance;
        c.max_steps = std::max<std::size_t>(schedule.polish_steps / 4, schedule.inner_steps());
        const OptResult r = gradient_descent(*f, theta, c, {0.0, 0});
        out.trace.append(r.trace);
        out.steps += r.steps;
        out.anchored = r.energy <= schedule.anchor_tolerance;
        theta = r.theta;
    }
    const auto k_total = schedule.intervals;
    for (std::size_t k = 1; k <= k_total; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(k_total);
        auto f = make_estimator(with_matrix(problem, interpolate_matrix(normalized, s)), ansatz, est);
        OptimizerConfig c = cfg;
        c.max_steps = schedule.inner_steps();
        c.tolerance = std::min(cfg.tolerance, target_energy(problem.task, fidelity_target, kappa));
        const OptResult r = gradient_descent(*f, theta, c, {s, 0});
        out.trace.append(r.trace);
        out.steps += r.steps;
        theta = r.theta;
        out.energy = r.energy;
    }
    {
        auto f = make_estimator(with_matrix(problem, normalized), ansatz, est);
        OptimizerConfig c = cfg;
        c.max_steps = schedule.polish_steps;
        c.tolerance = target_energy(problem.task, fidelity_target, kappa);
        const OptResult r = gradient_descent(*f, theta, c, {1.0, 0});
        out.trace.append(r.trace);
        out.steps += r.steps;
        theta = r.theta;
        out.energy = r.energy;
        out.ansatz_insufficient = r.energy > c.tolerance;
    }
    out.theta = std::move(theta);
    return out;
}

AdaptiveResult adaptive_depth_solve(const Problem& problem, const MorphSchedule& schedule, const OptimizerConfig& cfg,
                                    const EstimatorConfig& est, DepthRange range, double threshold,
                                    PrefixPlacement placement) {
    if (range.min_depth > range.max_depth) throw std::invalid_argument("empty depth range");
    AdaptiveResult best;
    double best_fidelity = -1.0;
    OptTrace all;
    for (std::size_t d = range.min_depth; d <= range.max_depth; ++d) {
        const auto t0 = std::chrono::steady_clock::now();
        Circuit ansatz = build_hardware_ansatz(problem.qubit_count(), d, problem.v0_prep, placement);
        OptimizerConfig c = cfg;
        c.seed = cfg.seed + 104729 * d;
        MorphResult m = morph_run(problem, ansatz, schedule, c, est, threshold);
        auto f = make_estimator(problem, ansatz, est);
        VerificationReport v = verify(*f, m.theta, threshold);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (auto& r : m.trace.records) r.depth = d;
        all.append(m.trace);
        best.attempts.push_back({d, v.energy, v.fidelity, v.passed, m.steps, secs});
        if (v.fidelity > best_fidelity || v.passed) {
            best_fidelity = v.fidelity;
            best.depth = d;
            best.theta = m.theta;
            best.ansatz = std::move(ansatz);
            best.verification = v;
            best.success = v.passed;
        }
        if (v.passed) break;
    }
    best.trace = std::move(all);
    return best;
}

}  // namespace vla
