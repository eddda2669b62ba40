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

// vla: command-line front end.
// Exit status: 0 verified success, 2 verified failure, 1 error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vla/bench.hpp"
#include "vla/driver.hpp"
#include "vla/dynamics.hpp"
#include "vla/io.hpp"

namespace {

using nlohmann::json;

constexpr int kExitSuccess = 0;
constexpr int kExitError = 1;
constexpr int kExitFailed = 2;

struct SolveOptions {
    std::string matrix;
    std::string v0 = "zero";
    std::string depth = "auto";
    std::size_t max_depth = 8;
    std::string optimizer;
    std::string mode = "exact";
    std::uint64_t shots = 1000;
    std::uint64_t seed = 0;
    std::string out;
    std::string trace;
    double fidelity_min = vla::kDefaultFidelityThreshold;
    bool allow_non_hermitian = false;
    bool oracle = false;
    double learning_rate = 0.1;
    std::size_t max_steps = 1000;
    std::size_t restarts = 0;
    std::string gradient = "analytic";
    std::vector<double> theta0;
    double total_time = 0.0;  // morph T; 0 picks the size-based default
};

struct EvolveOptions {
    std::string hamiltonian;
    std::vector<std::string> jumps;
    std::string v0 = "zero";
    std::size_t depth = 2;
    double time = 1.0;
    double dt = 0.01;
    bool imaginary = false;
    double relative_tolerance = 1e-3;
    double fidelity_min = vla::kDefaultFidelityThreshold;
    std::size_t trajectories = 1;
    std::uint64_t seed = 0;
    std::vector<double> theta0;
    bool random_init = false;
    std::string out;
    std::string trace;
};

struct BenchOptions {
    std::vector<std::size_t> n{2, 3, 4};
    std::vector<double> kappa{5.0, 10.0};
    double kappa_per_qubit = 0.0;
    std::vector<std::size_t> depths{0, 1, 2, 3, 4, 5, 6};
    std::size_t trials = 50;
    std::optional<std::uint64_t> seed;
    std::size_t threads = 0;
    bool timing = false;
    bool no_timing_columns = false;
    std::string out;
    std::string json_out;
};

struct VerifyOptions {
    std::string matrix;
    std::string v0 = "zero";
    std::string report;
    std::string task = "solve";
    std::string mode = "exact";
    std::uint64_t shots = 1000;
    std::uint64_t seed = 0;
    double fidelity_min = vla::kDefaultFidelityThreshold;
    bool allow_non_hermitian = false;
    bool oracle = false;
};

vla::Circuit load_v0(const std::string& spec, std::size_t qubits) {
    if (spec == "zero") return vla::Circuit(qubits);
    vla::Circuit c = vla::io::load_circuit(spec);
    if (c.parameter_count() != 0) throw std::invalid_argument("--v0 circuit must be parameter-free");
    if (c.qubit_count() != qubits) {
        throw std::invalid_argument("--v0 circuit has " + std::to_string(c.qubit_count()) + " qubits, matrix needs " +
                                    std::to_string(qubits));
    }
    return c;
}

vla::Problem load_problem(vla::Task task, const std::string& path, const std::string& v0, bool allow_non_hermitian) {
    vla::io::MatrixDocument doc = vla::io::load_matrix(path);
    doc.metadata.allow_non_hermitian = doc.metadata.allow_non_hermitian || allow_non_hermitian;
    const std::size_t n = doc.matrix.qubit_count();
    return vla::make_problem(task, std::move(doc.matrix), load_v0(v0, n), doc.metadata);
}

vla::EstimatorConfig estimator_config(const std::string& mode, std::uint64_t shots, std::uint64_t seed) {
    vla::EstimatorConfig e;
    e.mode = vla::estimator_mode_from_string(mode);
    e.shots = shots;
    e.seed = seed;
    e.validate();
    return e;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

template <class Fn>
void write_stream(const std::string& path, Fn&& fn) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    fn(f);
}

json echo(const SolveOptions& o) {
    return {{"matrix", o.matrix},       {"v0", o.v0},
            {"depth", o.depth},         {"max_depth", o.max_depth},
            {"optimizer", o.optimizer}, {"mode", o.mode},
            {"shots", o.shots},         {"fidelity_min", o.fidelity_min},
            {"learning_rate", o.learning_rate}, {"max_steps", o.max_steps},
            {"restarts", o.restarts},   {"gradient", o.gradient},
            {"theta0", o.theta0},       {"morph_time", o.total_time}};
}

int cmd_solve(const SolveOptions& o, vla::Task task) {
    const vla::Problem p = load_problem(task, o.matrix, o.v0, o.allow_non_hermitian);
    vla::SolveRequest req;
    req.optimizer = o.optimizer;
    if (o.depth != "auto") {
        try {
            req.depth = static_cast<std::size_t>(std::stoul(o.depth));
        } catch (const std::exception&) {
            throw std::invalid_argument("--depth must be an integer or 'auto'");
        }
    }
    req.max_depth = o.max_depth;
    req.estimator = estimator_config(o.mode, o.shots, o.seed);
    req.optimizer_config.learning_rate = o.learning_rate;
    req.optimizer_config.max_steps = o.max_steps;
    req.optimizer_config.restarts = o.restarts;
    req.optimizer_config.gradient = vla::gradient_method_from_string(o.gradient);
    req.optimizer_config.seed = o.seed;
    req.morph_time = o.total_time;
    req.theta0 = o.theta0;
    req.fidelity_min = o.fidelity_min;
    req.oracle = o.oracle;

    vla::OptTrace trace;
    vla::SolveReport rep = vla::run_solve(p, req, o.trace.empty() ? nullptr : &trace);
    SolveOptions echoed = o;
    echoed.optimizer = rep.optimizer;
    rep.config = echo(echoed);

    if (!o.trace.empty()) write_stream(o.trace, [&](std::ostream& f) { trace.write_csv(f); });
    const std::string text = vla::dump(rep);
    if (!o.out.empty()) write_text(o.out, text);
    else std::cout << text;
    std::cerr << rep.command << ": depth " << rep.depth << ", energy " << rep.energy << ", fidelity "
              << rep.verification.fidelity << (rep.verification.passed ? " (verified)" : " (below threshold)") << '\n';
    return rep.verification.passed ? kExitSuccess : kExitFailed;
}

int cmd_verify(const VerifyOptions& o) {
    std::ifstream f(o.report);
    if (!f) throw std::runtime_error("cannot read " + o.report);
    const vla::SolveReport prev = vla::report_from_json(json::parse(f));
    const vla::Problem p = load_problem(prev.task, o.matrix, o.v0, o.allow_non_hermitian);
    const vla::VerificationReport v =
        vla::reverify(p, prev, estimator_config(o.mode, o.shots, o.seed), o.fidelity_min, o.oracle);
    std::cout << vla::to_json(v).dump(2) << '\n';
    return v.passed ? kExitSuccess : kExitFailed;
}

vla::PauliSum load_operator(const std::string& path) { return vla::io::load_matrix(path).matrix; }

int cmd_evolve(const EvolveOptions& o, bool with_jumps) {
    vla::EvolutionSpec spec;
    spec.hamiltonian = load_operator(o.hamiltonian);
    for (const auto& j : o.jumps) spec.jumps.push_back(load_operator(j));
    spec.total_time = o.time;
    spec.dt = o.dt;
    spec.relative_tolerance = o.relative_tolerance;
    const std::size_t n = spec.hamiltonian.qubit_count();
    const vla::Circuit ansatz = vla::build_hardware_ansatz(n, o.depth, load_v0(o.v0, n), vla::PrefixPlacement::Last);
    // Zero angles start from |v0>, which is a stationary point for many Hamiltonians.
    vla::ParamVector theta0 = o.theta0;
    if (o.random_init) {
        std::mt19937_64 rng(vla::derive_seed(o.seed, ~std::uint64_t{0}));
        std::uniform_real_distribution<double> u(-M_PI, M_PI);
        theta0.resize(ansatz.parameter_count());
        for (auto& t : theta0) t = u(rng);
    } else if (theta0.empty()) {
        theta0.assign(ansatz.parameter_count(), 0.0);
    }
    if (theta0.size() != ansatz.parameter_count()) {
        throw std::invalid_argument("--theta0 has " + std::to_string(theta0.size()) + " values, ansatz has " +
                                    std::to_string(ansatz.parameter_count()) + " parameters");
    }

    if (!with_jumps) {
        vla::TrajectoryRecord rec;
        try {
            rec = o.imaginary ? vla::imag_time_evolve(spec, ansatz, theta0) : vla::real_time_evolve(spec, ansatz, theta0);
        } catch (const vla::StepFailure& e) {
            std::cerr << "evolve: " << e.what() << '\n';
            return kExitFailed;
        }
        if (!o.trace.empty()) write_stream(o.trace, [&](std::ostream& f) { rec.write_csv(f); });
        const std::string summary = rec.summary_json() + "\n";
        if (!o.out.empty()) write_text(o.out, summary);
        else std::cout << summary;
        const auto& last = rec.steps.empty() ? vla::StepRecord{} : rec.steps.back();
        const double f = last.exact_fidelity.value_or(1.0);
        return f >= o.fidelity_min ? kExitSuccess : kExitFailed;
    }

    spec.track_exact = false;
    const std::size_t count = std::max<std::size_t>(o.trajectories, 1);
    std::vector<vla::TrajectoryRecord> recs(count);
    vla::parallel_for(count, [&](std::size_t i) {
        std::mt19937_64 rng(vla::derive_seed(o.seed, i));
        recs[i] = vla::trajectory_run(spec, ansatz, theta0, rng);
    });
    if (!o.trace.empty()) write_stream(o.trace, [&](std::ostream& f) { recs.front().write_csv(f); });

    // Trajectory-averaged basis populations at every step.
    const std::size_t steps = spec.step_count();
    std::vector<std::vector<double>> pops(steps + 1, std::vector<double>(std::size_t{1} << n, 0.0));
    json jumps = json::array();
    for (const auto& r : recs) {
        for (std::size_t k = 0; k <= steps; ++k) {
            const vla::StateVector s = vla::prepare_state(ansatz, r.thetas[k]);
            for (std::size_t b = 0; b < s.dimension(); ++b) pops[k][b] += std::norm(s[b]) / static_cast<double>(count);
        }
        jumps.push_back(r.jump_times());
    }
    json out = {{"schema", vla::kReportSchema},
                {"trajectories", count},
                {"seed", o.seed},
                {"dt", spec.dt},
                {"steps", steps},
                {"populations", pops},
                {"jump_times", jumps}};
    if (!o.out.empty()) write_text(o.out, out.dump(2) + "\n");
    else std::cout << out.dump(2) << '\n';
    return kExitSuccess;
}

int cmd_bench(const BenchOptions& o) {
    vla::ExperimentConfig cfg;
    cfg.qubits = o.n;
    cfg.kappas = o.kappa;
    if (o.kappa_per_qubit > 0.0) cfg.kappa_per_qubit = o.kappa_per_qubit;
    cfg.depths = o.depths;
    cfg.trials = o.trials;
    cfg.threads = o.threads;
    if (o.seed) {
        cfg.seed = *o.seed;
    } else {
        cfg.seed = std::random_device{}();
        std::cerr << "bench: seed " << cfg.seed << '\n';
    }
    const vla::ExperimentResult r = o.timing ? vla::timing_experiment(cfg) : vla::success_experiment(cfg);
    auto emit = [&](std::ostream& f) { r.write_csv(f, !o.no_timing_columns); };
    if (!o.out.empty()) write_stream(o.out, emit);
    else emit(std::cout);
    if (!o.json_out.empty()) {
        json j = {{"schema", vla::kReportSchema}, {"seed", cfg.seed}, {"trials", cfg.trials}};
        json md = json::array();
        for (const auto& [key, d] : r.min_depth) {
            md.push_back({{"n", key.first}, {"kappa", key.second}, {"min_depth", d ? json(*d) : json(nullptr)}});
        }
        j["min_depth"] = md;
        if (r.fitted_exponent) j["fitted_exponent"] = *r.fitted_exponent;
        if (r.fitted_prefactor) j["fitted_prefactor"] = *r.fitted_prefactor;
        write_text(o.json_out, j.dump(2) + "\n");
    }
    return kExitSuccess;
}

void add_solve_options(CLI::App* cmd, SolveOptions& o) {
    cmd->add_option("--matrix", o.matrix, "Matrix file (.mtx, .json or Pauli text)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--v0", o.v0, "Circuit JSON preparing |v0>, or 'zero'");
    cmd->add_option("--depth", o.depth, "Ansatz depth, or 'auto' to escalate");
    cmd->add_option("--max-depth", o.max_depth, "Upper depth for --depth auto");
    cmd->add_option("--optimizer", o.optimizer, "vqe, ite or morph (default: morph for solve, vqe for multiply)")
        ->check(CLI::IsMember({"vqe", "ite", "morph"}));
    cmd->add_option("--mode", o.mode, "Estimator: exact, hadamard or shots");
    cmd->add_option("--shots", o.shots, "Shots per amplitude estimate in shots mode");
    cmd->add_option("--seed", o.seed, "Seed for initial angles, restarts and shot noise");
    cmd->add_option("--out", o.out, "Report JSON path (default: stdout)");
    cmd->add_option("--trace", o.trace, "Optimizer trace CSV path");
    cmd->add_option("--fidelity-min", o.fidelity_min, "Verification threshold")->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("--allow-non-hermitian", o.allow_non_hermitian, "Accept a non-Hermitian matrix for solve");
    cmd->add_flag("--oracle", o.oracle, "Also report the dense-oracle fidelity");
    cmd->add_option("--learning-rate", o.learning_rate, "Initial gradient step");
    cmd->add_option("--max-steps", o.max_steps, "Step budget per optimization");
    cmd->add_option("--restarts", o.restarts, "Random restarts (vqe)");
    cmd->add_option("--gradient", o.gradient, "analytic or fd")->check(CLI::IsMember({"analytic", "fd"}));
    cmd->add_option("--theta0", o.theta0, "Initial angles (vqe, ite)")->delimiter(',');
    cmd->add_option("--morph-time", o.total_time, "Morphing total time T (default from size)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational matrix-vector multiplication and linear solves on a statevector simulator"};
    app.set_config("--config", "", "key=value configuration file; flags override it");
    app.require_subcommand(1);

    SolveOptions multiply_opts, solve_opts;
    auto* multiply = app.add_subcommand("multiply", "Prepare M|v0> / ||M|v0>||");
    add_solve_options(multiply, multiply_opts);
    auto* solve = app.add_subcommand("solve", "Prepare M^-1|v0> / ||M^-1|v0>||");
    add_solve_options(solve, solve_opts);

    EvolveOptions evolve_opts, traj_opts;
    for (auto [name, opts] : {std::pair{"evolve", &evolve_opts}, std::pair{"trajectory", &traj_opts}}) {
        auto* cmd = app.add_subcommand(name, std::string(name) == "evolve" ? "Real- or imaginary-time evolution"
                                                                            : "Quantum-jump trajectories");
        cmd->add_option("--hamiltonian", opts->hamiltonian, "Hermitian matrix file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--v0", opts->v0, "Circuit JSON preparing the initial state, or 'zero'");
        cmd->add_option("--depth", opts->depth, "Ansatz depth");
        cmd->add_option("--time", opts->time, "Total time");
        cmd->add_option("--dt", opts->dt, "Step size");
        cmd->add_option("--step-tolerance", opts->relative_tolerance, "Per-step energy tolerance relative to the start");
        cmd->add_option("--fidelity-min", opts->fidelity_min, "Final-fidelity threshold for the exit status");
        cmd->add_option("--out", opts->out, "Summary JSON path (default: stdout)");
        cmd->add_option("--trace", opts->trace, "Per-step CSV path");
        cmd->add_option("--seed", opts->seed, "Seed");
        cmd->add_option("--theta0", opts->theta0, "Initial angles")->delimiter(',');
        cmd->add_flag("--random-init", opts->random_init, "Draw initial angles uniformly from the seed");
        if (std::string(name) == "evolve") {
            cmd->add_flag("--imaginary", opts->imaginary, "Imaginary-time evolution");
        } else {
            cmd->add_option("--jump", opts->jumps, "Jump operator file (repeatable)")->required()->check(CLI::ExistingFile);
            cmd->add_option("--trajectories", opts->trajectories, "Number of trajectories");
        }
    }

    BenchOptions bench_opts;
    std::uint64_t bench_seed = 0;
    auto* bench = app.add_subcommand("bench", "Success-probability or timing sweep over random problems");
    bench->add_option("--n", bench_opts.n, "Qubit counts")->delimiter(',');
    bench->add_option("--kappa", bench_opts.kappa, "Condition numbers")->delimiter(',');
    bench->add_option("--kappa-per-qubit", bench_opts.kappa_per_qubit, "Use kappa = c * n instead of --kappa");
    bench->add_option("--depths", bench_opts.depths, "Depths to try")->delimiter(',');
    bench->add_option("--trials", bench_opts.trials, "Trials per cell");
    auto* seed_opt = bench->add_option("--seed", bench_seed, "Base seed (generated and printed when absent)");
    bench->add_option("--threads", bench_opts.threads, "Worker threads (default: VLA_THREADS or all cores)");
    bench->add_flag("--timing", bench_opts.timing, "Timing sweep with adaptive depth instead of success counts");
    bench->add_flag("--no-timing-columns", bench_opts.no_timing_columns, "Omit wall-clock columns from the CSV");
    bench->add_option("--out", bench_opts.out, "CSV path (default: stdout)");
    bench->add_option("--json", bench_opts.json_out, "Summary JSON path");

    VerifyOptions verify_opts;
    auto* verify = app.add_subcommand("verify", "Re-verify a saved solve report");
    verify->add_option("--matrix", verify_opts.matrix, "Matrix file")->required()->check(CLI::ExistingFile);
    verify->add_option("--report", verify_opts.report, "Report JSON from solve/multiply")->required()->check(CLI::ExistingFile);
    verify->add_option("--v0", verify_opts.v0, "Circuit JSON preparing |v0>, or 'zero'");
    verify->add_option("--mode", verify_opts.mode, "Estimator: exact, hadamard or shots");
    verify->add_option("--shots", verify_opts.shots, "Shots per amplitude estimate");
    verify->add_option("--seed", verify_opts.seed, "Shot-noise seed");
    verify->add_option("--fidelity-min", verify_opts.fidelity_min, "Verification threshold");
    verify->add_flag("--allow-non-hermitian", verify_opts.allow_non_hermitian, "Accept a non-Hermitian matrix for solve");
    verify->add_flag("--oracle", verify_opts.oracle, "Also report the dense-oracle fidelity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitSuccess : kExitError;
    }

    try {
        if (*multiply) return cmd_solve(multiply_opts, vla::Task::Multiply);
        if (*solve) return cmd_solve(solve_opts, vla::Task::Solve);
        if (app.got_subcommand("evolve")) return cmd_evolve(evolve_opts, false);
        if (app.got_subcommand("trajectory")) return cmd_evolve(traj_opts, true);
        if (*bench) {
            if (seed_opt->count() > 0) bench_opts.seed = bench_seed;
            return cmd_bench(bench_opts);
        }
        if (*verify) return cmd_verify(verify_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
