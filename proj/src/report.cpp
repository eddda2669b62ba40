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

#include "vla/report.hpp"

#include <stdexcept>

namespace vla {

using nlohmann::json;

namespace {

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_get(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

}  // namespace

TraceSummary TraceSummary::of(const OptTrace& trace, double final_energy, std::size_t evaluations) {
    TraceSummary s;
    s.steps = trace.records.size();
    s.initial_energy = trace.records.empty() ? final_energy : trace.records.front().energy;
    s.final_energy = final_energy;
    s.evaluations = evaluations;
    return s;
}

json to_json(const VerificationReport& v) {
    return {{"task", to_string(v.task)},
            {"energy", v.energy},
            {"threshold", v.threshold},
            {"fidelity", v.fidelity},
            {"fidelity_bound_raw", opt(v.fidelity_bound_raw)},
            {"residual_ratio", opt(v.residual_ratio)},
            {"kappa", opt(v.kappa)},
            {"oracle_fidelity", opt(v.oracle_fidelity)},
            {"passed", v.passed}};
}

VerificationReport verification_from_json(const json& j) {
    VerificationReport v;
    v.task = task_from_string(j.at("task").get<std::string>());
    v.energy = j.at("energy").get<double>();
    v.threshold = j.at("threshold").get<double>();
    v.fidelity = j.at("fidelity").get<double>();
    v.fidelity_bound_raw = opt_get<double>(j, "fidelity_bound_raw");
    v.residual_ratio = opt_get<double>(j, "residual_ratio");
    v.kappa = opt_get<double>(j, "kappa");
    v.oracle_fidelity = opt_get<double>(j, "oracle_fidelity");
    v.passed = j.at("passed").get<bool>();
    return v;
}

json to_json(const SolveReport& r) {
    json attempts = json::array();
    for (const auto& a : r.attempts) {
        attempts.push_back({{"depth", a.depth},
                            {"energy", a.energy},
                            {"fidelity_bound", a.fidelity_bound},
                            {"success", a.success},
                            {"steps", a.steps},
                            {"seconds", a.seconds}});
    }
    return {{"schema", r.schema},
            {"command", r.command},
            {"task", to_string(r.task)},
            {"optimizer", r.optimizer},
            {"mode", r.mode},
            {"qubits", r.qubits},
            {"depth", r.depth},
            {"theta", r.theta},
            {"energy", r.energy},
            {"verification", to_json(r.verification)},
            {"attempts", attempts},
            {"trace",
             {{"steps", r.trace.steps},
              {"initial_energy", r.trace.initial_energy},
              {"final_energy", r.trace.final_energy},
              {"evaluations", r.trace.evaluations}}},
            {"seed", r.seed},
            {"config", r.config},
            {"wall_seconds", r.wall_seconds}};
}

SolveReport report_from_json(const json& j) {
    try {
        SolveReport r;
        r.schema = j.at("schema").get<int>();
        if (r.schema != kReportSchema) throw std::invalid_argument("unsupported report schema " + std::to_string(r.schema));
        r.command = j.at("command").get<std::string>();
        r.task = task_from_string(j.at("task").get<std::string>());
        r.optimizer = j.at("optimizer").get<std::string>();
        r.mode = j.at("mode").get<std::string>();
        r.qubits = j.at("qubits").get<std::size_t>();
        r.depth = j.at("depth").get<std::size_t>();
        r.theta = j.at("theta").get<ParamVector>();
        r.energy = j.at("energy").get<double>();
        r.verification = verification_from_json(j.at("verification"));
        for (const auto& a : j.at("attempts")) {
            r.attempts.push_back({a.at("depth").get<std::size_t>(), a.at("energy").get<double>(),
                                  a.at("fidelity_bound").get<double>(), a.at("success").get<bool>(),
                                  a.at("steps").get<std::size_t>(), a.at("seconds").get<double>()});
        }
        const auto& t = j.at("trace");
        r.trace = {t.at("steps").get<std::size_t>(), t.at("initial_energy").get<double>(),
                   t.at("final_energy").get<double>(), t.at("evaluations").get<std::size_t>()};
        r.seed = j.at("seed").get<std::uint64_t>();
        r.config = j.at("config");
        r.wall_seconds = j.at("wall_seconds").get<double>();
        return r;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed report: ") + e.what());
    }
}

std::string dump(const SolveReport& r) { return to_json(r).dump(2) + "\n"; }

}  // namespace vla
