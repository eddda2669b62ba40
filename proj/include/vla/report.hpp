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
 * Machine-readable solve reports ("schema": 1).
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "vla/optimize.hpp"
#include "vla/verify.hpp"

namespace vla {

inline constexpr int kReportSchema = 1;

struct TraceSummary {
    std::size_t steps = 0;
    double initial_energy = 0.0;
    double final_energy = 0.0;
    std::size_t evaluations = 0;

    static TraceSummary of(const OptTrace& trace, double final_energy, std::size_t evaluations = 0);
};

struct SolveReport {
    int schema = kReportSchema;
    std::string command;
    Task task = Task::Solve;
    std::string optimizer;
    std::string mode;
    std::size_t qubits = 0;
    std::size_t depth = 0;
    ParamVector theta;
    double energy = 0.0;
    VerificationReport verification;
    std::vector<DepthAttempt> attempts;
    TraceSummary trace;
    std::uint64_t seed = 0;
    /// Effective configuration, echoed verbatim.
    nlohmann::json config = nlohmann::json::object();
    double wall_seconds = 0.0;
};

[[nodiscard]] nlohmann::json to_json(const VerificationReport& v);
[[nodiscard]] VerificationReport verification_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json to_json(const SolveReport& r);
/// Throws std::invalid_argument for a missing field or an unknown schema.
[[nodiscard]] SolveReport report_from_json(const nlohmann::json& j);

/// Pretty-printed JSON with sorted keys and a trailing newline.
[[nodiscard]] std::string dump(const SolveReport& r);

}  // namespace vla
