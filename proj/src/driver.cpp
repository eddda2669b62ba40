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

#include "vla/driver.hpp"

#include <chrono>
#include <stdexcept>

namespace vla {

namespace {

using Clock = std::chrono::steady_clock;

std::string resolved_optimizer(const SolveRequest& req, Task task) {
    if (!req.optimizer.empty()) return req.optimizer;
    return task == Task::Solve ? "morph" : "vqe";
}

Circuit ansatz_for(const Problem& p, std::size_t depth) {
    return build_hardware_ansatz(p.qubit_count(), depth, p.v0_prep, PrefixPlacement::Last);
}

}  // namespace

void SolveRequest::validate() const {
    if (!optimizer.empty() && optimizer != "vqe" && optimizer != "ite" && optimizer != "morph") {
        throw std::invalid_argument("optimizer must be vqe, ite or morph, got '" + optimizer + "'");
    }
    if (!(fidelity_min >= 0.0 && fidelity_min <= 1.0)) throw std::invalid_argument("fidelity_min must lie in [0, 1]");
    if (morph_time < 0.0) throw std::invalid_argument("morph_time must be non-negative");
    estimator.validate();
    optimizer_config.validate();
}

SolveReport run_solve(const Problem& p, const SolveRequest& req, OptTrace* trace) {
    req.validate();
    const auto t0 = Clock::now();
    const std::string opt = resolved_optimizer(req, p.task);
    MorphSchedule schedule = MorphSchedule::for_qubits(p.qubit_count());
    if (req.morph_time > 0.0) schedule.total_time = req.morph_time;

    const std::size_t lo = req.depth.value_or(0);
    const std::size_t hi = req.depth.value_or(req.max_depth);

    SolveReport rep;
    rep.command = to_string(p.task);
    rep.task = p.task;
    rep.optimizer = opt;
    rep.mode = to_string(req.estimator.mode);
    rep.qubits = p.qubit_count();
    rep.seed = req.optimizer_config.seed;

    bool have = false;
    for (std::size_t d = lo; d <= hi; ++d) {
        const auto ts = Clock::now();
        const Circuit ansatz = ansatz_for(p, d);
        auto est = make_estimator(p, ansatz, req.estimator);
        OptimizerConfig cfg = req.optimizer_config;
        cfg.seed = req.optimizer_config.seed + 104729 * d;

        ParamVector theta;
        OptTrace run_trace;
        std::size_t steps = 0;
        if (opt == "morph") {
            MorphResult r = morph_run(p, ansatz, schedule, cfg, req.estimator, req.fidelity_min);
            theta = std::move(r.theta);
            run_trace = std::move(r.trace);
            steps = r.steps;
        } else {
            ParamVector theta0 = req.theta0;
            if (theta0.empty()) theta0.assign(ansatz.parameter_count(), 0.0);
            if (theta0.size() != ansatz.parameter_count()) {
                throw std::invalid_argument("theta0 has " + std::to_string(theta0.size()) + " values, depth-" +
                                            std::to_string(d) + " ansatz has " +
                                            std::to_string(ansatz.parameter_count()) + " parameters");
            }
            const TraceLabel label{1.0, d};
            OptResult r = opt == "ite" ? ite_run(*est, theta0, cfg, label) : vqe_run(*est, theta0, cfg, label);
            theta = std::move(r.theta);
            run_trace = std::move(r.trace);
            steps = r.steps;
        }

        const VerificationReport v = verify(*est, theta, req.fidelity_min, req.oracle);
        const double secs = std::chrono::duration<double>(Clock::now() - ts).count();
        rep.attempts.push_back({d, v.energy, v.fidelity_bound_raw.value_or(v.fidelity), v.passed, steps, secs});
        if (trace) trace->append(run_trace);
        if (!have || v.passed || v.fidelity > rep.verification.fidelity) {
            have = true;
            rep.depth = d;
            rep.theta = theta;
            rep.energy = v.energy;
            rep.verification = v;
            rep.trace = TraceSummary::of(run_trace, v.energy, est->evaluations());
            rep.trace.steps = steps;
        }
        if (v.passed) break;
    }
    rep.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return rep;
}

VerificationReport reverify(const Problem& p, const SolveReport& report, const EstimatorConfig& est_cfg,
                            double fidelity_min, bool oracle) {
    if (report.task != p.task) throw std::invalid_argument("report task does not match the problem");
    if (report.qubits != p.qubit_count()) throw std::invalid_argument("report qubit count does not match the problem");
    const Circuit ansatz = ansatz_for(p, report.depth);
    if (report.theta.size() != ansatz.parameter_count()) {
        throw std::invalid_argument("report angles do not fit the depth-" + std::to_string(report.depth) + " ansatz");
    }
    auto est = make_estimator(p, ansatz, est_cfg);
    return verify(*est, report.theta, fidelity_min, oracle);
}

StateVector report_state(const Problem& p, const SolveReport& report) {
    const Circuit ansatz = ansatz_for(p, report.depth);
    if (report.theta.size() != ansatz.parameter_count()) {
        throw std::invalid_argument("report angles do not fit the depth-" + std::to_string(report.depth) + " ansatz");
    }
    return prepare_state(ansatz, report.theta);
}

}  // namespace vla
