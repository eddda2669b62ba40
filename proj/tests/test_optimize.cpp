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

#include <doctest.h>

#include <limits>
#include <sstream>

#include "fixtures.hpp"
#include "vla/bench.hpp"
#include "vla/optimize.hpp"

using namespace fixture;
using vla::OptimizerConfig;
using vla::StopReason;

namespace {

// E(x) = x^2 for the first call pattern, NaN once x leaves [-1, 1].
class NanBowl final : public vla::Objective {
  public:
    std::size_t parameter_count() const override { return 1; }
    vla::EnergyReport evaluate(std::span<const double> t) override {
        vla::EnergyReport r;
        r.value = std::abs(t[0]) > 1.0 ? std::numeric_limits<double>::quiet_NaN() : t[0] * t[0];
        return r;
    }
    std::vector<double> gradient(std::span<const double> t) override { return {-50.0 * t[0]}; }
    Eigen::MatrixXd metric(std::span<const double>) override { return Eigen::MatrixXd::Identity(1, 1); }
    std::size_t evaluations() const override { return 0; }
};

// A plateau: constant energy with a tiny nonzero gradient.
class Plateau final : public vla::Objective {
  public:
    std::size_t parameter_count() const override { return 1; }
    vla::EnergyReport evaluate(std::span<const double>) override {
        vla::EnergyReport r;
        r.value = 0.5;
        return r;
    }
    std::vector<double> gradient(std::span<const double>) override { return {1e-3}; }
    Eigen::MatrixXd metric(std::span<const double>) override { return Eigen::MatrixXd::Identity(1, 1); }
    std::size_t evaluations() const override { return 0; }
};

double m2_optimum() { return -std::atan(0.75); }

}  // namespace

TEST_CASE("configuration validation") {
    OptimizerConfig c;
    CHECK_NOTHROW(c.validate());
    c.learning_rate = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = OptimizerConfig{};
    c.tolerance = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK(vla::gradient_method_from_string("fd") == vla::GradientMethod::FiniteDifference);
    CHECK(vla::gradient_method_from_string("analytic") == vla::GradientMethod::Analytic);
    CHECK_THROWS_AS((void)vla::gradient_method_from_string("newton"), std::invalid_argument);
}

TEST_CASE("gradient descent on the two-by-two system") {
    vla::SolveEstimator est(m2_problem(Task::Solve), single_ry(), EstimatorConfig{});

    SUBCASE("from a small negative angle") {
        OptimizerConfig c;
        c.learning_rate = 0.1;
        const auto r = vla::gradient_descent(est, std::vector<double>{-0.08}, c);
        CHECK(r.reason == StopReason::Tolerance);
        CHECK(r.steps <= 200);
        CHECK(std::abs(r.theta[0] - m2_optimum()) < 1e-4);
        const double f = vla::oracle_fidelity(est.problem(), est.ansatz(), r.theta);
        CHECK(f >= 0.9995);
    }
    SUBCASE("finite-difference gradients reach the same point") {
        OptimizerConfig c;
        c.gradient = vla::GradientMethod::FiniteDifference;
        const auto r = vla::gradient_descent(est, std::vector<double>{-0.08}, c);
        CHECK(std::abs(r.theta[0] - m2_optimum()) < 1e-4);
    }
    SUBCASE("start at the solution") {
        const auto r = vla::gradient_descent(est, std::vector<double>{m2_optimum()}, OptimizerConfig{});
        CHECK(r.steps == 0);
        CHECK(r.reason == StopReason::Tolerance);
    }
    SUBCASE("best-so-far energy is monotone") {
        OptimizerConfig c;
        c.tolerance = 1e-14;
        c.max_steps = 300;
        c.learning_rate = 3.0;
        const auto r = vla::gradient_descent(est, std::vector<double>{2.5}, c);
        REQUIRE(r.trace.records.size() > 2);
        for (std::size_t i = 1; i < r.trace.records.size(); ++i) {
            CHECK(r.trace.records[i].best_energy <= r.trace.records[i - 1].best_energy);
        }
        CHECK(r.energy <= r.trace.records.front().energy);
    }
}

TEST_CASE("trace output") {
    vla::SolveEstimator est(m2_problem(Task::Solve), single_ry(), EstimatorConfig{});
    OptimizerConfig c;
    c.record_theta = true;
    const auto r = vla::gradient_descent(est, std::vector<double>{-0.08}, c, vla::TraceLabel{0.5, 3});
    REQUIRE_FALSE(r.trace.records.empty());
    CHECK(r.trace.records[0].theta.size() == 1);
    CHECK(r.trace.records[0].morph_fraction == 0.5);
    CHECK(r.trace.records[0].depth == 3);
    std::ostringstream out;
    r.trace.write_csv(out);
    const std::string csv = out.str();
    CHECK(csv.rfind("step,energy,best_energy,gradient_norm,learning_rate,morph_fraction,depth\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.trace.records.size() + 1));
}

TEST_CASE("stop conditions") {
    SUBCASE("non-finite energy aborts") {
        NanBowl f;
        OptimizerConfig c;
        c.backtracking = false;
        CHECK_THROWS_AS(vla::gradient_descent(f, std::vector<double>{0.5}, c), vla::NumericalFailure);
    }
    SUBCASE("plateau stalls") {
        Plateau f;
        const auto r = vla::gradient_descent(f, std::vector<double>{0.0}, OptimizerConfig{});
        CHECK(r.reason == StopReason::Stall);
        CHECK(r.steps <= 60);
    }
    SUBCASE("budget") {
        vla::SolveEstimator est(m2_problem(Task::Solve), single_ry(), EstimatorConfig{});
        OptimizerConfig c;
        c.max_steps = 3;
        c.learning_rate = 1e-4;
        c.growth = 1.0;
        const auto r = vla::gradient_descent(est, std::vector<double>{2.0}, c);
        CHECK(r.reason == StopReason::Budget);
        CHECK(r.steps == 3);
    }
}

TEST_CASE("restarts on a random multiplication problem") {
    std::mt19937_64 rng(2024);
    int solved = 0;
    for (int trial = 0; trial < 5; ++trial) {
        Instance in = random_instance(Task::Multiply, 2, 2, rng);
        vla::MultiplyEstimator est(in.problem, in.ansatz, EstimatorConfig{});
        OptimizerConfig c;
        c.restarts = 5;
        c.max_steps = 3000;
        c.seed = 17 + trial;
        const std::vector<double> start(in.ansatz.parameter_count(), 0.01);
        const auto r = vla::vqe_run(est, start, c);
        CHECK(r.energy == doctest::Approx(oracle_energy(in, r.theta)).epsilon(1e-10).scale(1.0));
        if (r.energy < 1e-6) ++solved;
    }
    CHECK(solved == 5);
}

TEST_CASE("imaginary-time steps") {
    SUBCASE("closed form on the two-by-two system") {
        vla::SolveEstimator est(m2_problem(Task::Solve), single_ry(), EstimatorConfig{});
        for (double a : {-0.08, 0.4, 1.3, -2.0}) {
            const auto next = vla::ite_step(est, std::vector<double>{a}, 0.05, 0.0);
            // metric 1/4, V = g/2, so thetadot = -2 g.
            CHECK(next[0] == doctest::Approx(a - 0.05 * 2.0 * m2_gradient(a)).epsilon(1e-10));
        }
        const auto fixed = vla::ite_step(est, std::vector<double>{m2_optimum()}, 0.05);
        CHECK(fixed[0] == doctest::Approx(m2_optimum()).epsilon(1e-12));
    }
    SUBCASE("energy decreases on random instances") {
        // Unit spectral norm keeps energies in the scale the step size is chosen for.
        std::mt19937_64 rng(99);
        int decreased_big = 0, decreased_small = 0;
        const int trials = 100;
        for (int trial = 0; trial < trials; ++trial) {
            Instance in = random_instance(trial % 2 ? Task::Solve : Task::Multiply, 2, 1, rng);
            const double norm = Eigen::JacobiSVD<oracle::Mat>(in.m).singularValues()(0);
            in.m /= norm;
            in.problem.matrix = in.problem.matrix.scaled(1.0 / norm);
            auto est = vla::make_estimator(in.problem, in.ansatz, EstimatorConfig{});
            const double e0 = oracle_energy(in, in.theta);
            if (oracle_energy(in, vla::ite_step(*est, in.theta, 0.05)) < e0) ++decreased_big;
            if (oracle_energy(in, vla::ite_step(*est, in.theta, 1e-3)) < e0) ++decreased_small;
        }
        CHECK(decreased_big >= trials * 95 / 100);
        CHECK(decreased_small == trials);
    }
    SUBCASE("ite_run converges on the two-by-two system") {
        vla::SolveEstimator est(m2_problem(Task::Solve), single_ry(), EstimatorConfig{});
        OptimizerConfig c;
        c.learning_rate = 0.2;
        const auto r = vla::ite_run(est, std::vector<double>{-0.08}, c);
        CHECK(std::abs(r.theta[0] - m2_optimum()) < 1e-4);
    }
}

TEST_CASE("morphing") {
    SUBCASE("schedule defaults") {
        CHECK(vla::MorphSchedule::for_qubits(1).total_time == 20.0);
        CHECK(vla::MorphSchedule::for_qubits(3).total_time == 40.0);
        CHECK(vla::MorphSchedule::for_qubits(20).total_time == 100.0);
        CHECK(vla::MorphSchedule{}.inner_steps() == 20);
        vla::MorphSchedule bad;
        bad.intervals = 0;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    }
    SUBCASE("identity matrix keeps the anchor") {
        std::mt19937_64 rng(4);
        const Circuit prep = oracle::random_prep(2, rng);
        const Problem p = vla::make_problem(Task::Solve, PauliSum::identity(2), prep);
        const Circuit a = vla::build_hardware_ansatz(2, 1, prep);
        const auto r = vla::morph_run(p, a, vla::MorphSchedule{}, OptimizerConfig{}, EstimatorConfig{});
        CHECK(r.anchored);
        CHECK(r.energy < 1e-8);
        CHECK(vla::oracle_fidelity(p, a, r.theta) > 1.0 - 1e-7);
    }
    SUBCASE("two-by-two system") {
        const Problem p = m2_problem(Task::Solve);
        const auto r = vla::morph_run(p, single_ry(), vla::MorphSchedule{}, OptimizerConfig{}, EstimatorConfig{});
        CHECK(vla::oracle_fidelity(p, single_ry(), r.theta) >= 0.999);
        CHECK_FALSE(r.ansatz_insufficient);
    }
    SUBCASE("insufficient ansatz is signalled") {
        // A one-qubit Ry ansatz cannot reach a complex solution.
        PauliSum m(1);
        m.add(2.0, "I");
        m.add(0.9, "Y");
        const Problem p = vla::make_problem(Task::Solve, m, Circuit());
        vla::MorphSchedule s;
        s.polish_steps = 500;
        const auto r = vla::morph_run(p, single_ry(), s, OptimizerConfig{}, EstimatorConfig{});
        CHECK(r.ansatz_insufficient);
    }
}

TEST_CASE("target energies") {
    CHECK(vla::target_energy(Task::Multiply, 0.99, 10.0) == doctest::Approx(0.01));
    CHECK(vla::target_energy(Task::Solve, 0.99, 10.0) == doctest::Approx(1e-4));
}

TEST_CASE("adaptive depth") {
    SUBCASE("product-state solution at depth zero") {
        PauliSum m(2);
        m.add(2.0, "II");
        m.add(0.5, "ZI");
        m.add(0.3, "IZ");
        const Problem p = vla::make_problem(Task::Solve, m, Circuit());
        const auto r = vla::adaptive_depth_solve(p, vla::MorphSchedule::for_qubits(2), OptimizerConfig{},
                                                 EstimatorConfig{}, vla::DepthRange{0, 3});
        CHECK(r.success);
        CHECK(r.depth == 0);
        CHECK(r.attempts.size() == 1);
    }
    SUBCASE("random two-qubit system") {
        const Problem p = vla::random_problem(2, 5.0, 42);
        const auto r = vla::adaptive_depth_solve(p, vla::MorphSchedule::for_qubits(2), OptimizerConfig{},
                                                 EstimatorConfig{}, vla::DepthRange{0, 3});
        REQUIRE(r.success);
        CHECK(r.depth <= 3);
        CHECK(r.verification.passed);
        CHECK(vla::oracle_fidelity(p, r.ansatz, r.theta) >= 0.99);
        for (std::size_t i = 0; i + 1 < r.attempts.size(); ++i) CHECK_FALSE(r.attempts[i].success);
    }
    SUBCASE("exhausted range reports the best attempt") {
        const Problem p = vla::random_problem(3, 20.0, 9);
        const auto r = vla::adaptive_depth_solve(p, vla::MorphSchedule::for_qubits(3), OptimizerConfig{},
                                                 EstimatorConfig{}, vla::DepthRange{0, 0});
        CHECK_FALSE(r.success);
        CHECK(r.attempts.size() == 1);
        CHECK(r.verification.fidelity < 0.99);
    }
    SUBCASE("empty range") {
        const Problem p = vla::random_problem(2, 5.0, 1);
        CHECK_THROWS_AS(vla::adaptive_depth_solve(p, vla::MorphSchedule{}, OptimizerConfig{}, EstimatorConfig{},
                                                  vla::DepthRange{3, 2}),
                        std::invalid_argument);
    }
}

TEST_CASE("determinism") {
    const Problem p = vla::random_problem(3, 10.0, 5);
    const Circuit a = vla::build_hardware_ansatz(3, 2, p.v0_prep);
    OptimizerConfig c;
    c.seed = 12;
    c.record_theta = true;
    const auto r1 = vla::morph_run(p, a, vla::MorphSchedule::for_qubits(3), c, EstimatorConfig{});
    const auto r2 = vla::morph_run(p, a, vla::MorphSchedule::for_qubits(3), c, EstimatorConfig{});
    REQUIRE(r1.trace.records.size() == r2.trace.records.size());
    for (std::size_t i = 0; i < r1.trace.records.size(); ++i) {
        CHECK(r1.trace.records[i].energy == r2.trace.records[i].energy);
        CHECK(r1.trace.records[i].theta == r2.trace.records[i].theta);
    }
    CHECK(r1.theta == r2.theta);
}
