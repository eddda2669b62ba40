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
 * End-to-end multiply/solve driver shared by the CLI and the Python module.
 */

#pragma once

#include <optional>
#include <string>

#include "vla/report.hpp"

namespace vla {

struct SolveRequest {
    /// Empty picks morph for solve and vqe for multiply.
    std::string optimizer;
    /// Fixed depth; nullopt escalates from 0 to max_depth until verification passes.
    std::optional<std::size_t> depth;
    std::size_t max_depth = 8;
    EstimatorConfig estimator;
    OptimizerConfig optimizer_config;
    /// Morphing total time; 0 keeps the size-based default.
    double morph_time = 0.0;
    /// Initial angles for vqe/ite; empty means zeros, which prepare |v0>.
    ParamVector theta0;
    double fidelity_min = kDefaultFidelityThreshold;
    bool oracle = false;

    void validate() const;
};

/// Runs the request; `trace`, when given, receives every optimizer record across depths.
[[nodiscard]] SolveReport run_solve(const Problem& p, const SolveRequest& req, OptTrace* trace = nullptr);

/// Re-verifies saved angles against `p` at the report's depth.
[[nodiscard]] VerificationReport reverify(const Problem& p, const SolveReport& report, const EstimatorConfig& est,
                                          double fidelity_min, bool oracle = false);

/// Normalized output state of a report.
[[nodiscard]] StateVector report_state(const Problem& p, const SolveReport& report);

}  // namespace vla
