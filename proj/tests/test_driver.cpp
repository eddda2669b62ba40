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

#include "fixtures.hpp"
#include "vla/bench.hpp"
#include "vla/driver.hpp"

using namespace fixture;

namespace {

oracle::Vec zero_state(std::size_t n) {
    oracle::Vec v = oracle::Vec::Zero(Eigen::Index{1} << n);
    v(0) = 1.0;
    return v;
}

}  // namespace

TEST_CASE("driver solves the two-by-two example with the default optimizer") {
    const Problem p = m2_problem(Task::Solve);
    vla::SolveRequest req;
    req.oracle = true;
    const vla::SolveReport r = vla::run_solve(p, req);
    CHECK(r.optimizer == "morph");
    CHECK(r.verification.passed);
    CHECK(r.verification.fidelity >= 0.9995);
    REQUIRE(r.verification.oracle_fidelity);
    const oracle::Vec target = oracle::solve_state(oracle::sum_matrix(m2_sum()), zero_state(1));
    const double f = oracle::fidelity(oracle::to_vec(vla::report_state(p, r)), target);
    CHECK(f == doctest::Approx(*r.verification.oracle_fidelity).epsilon(1e-12));
    CHECK(f >= r.verification.fidelity - 1e-12);
    CHECK(r.attempts.size() == r.depth + 1);
    CHECK(r.attempts.back().success);
}

TEST_CASE("driver escalates depth until verification passes") {
    const Problem p = vla::random_problem(2, 5.0, 11);
    vla::SolveRequest req;
    req.max_depth = 6;
    const vla::SolveReport r = vla::run_solve(p, req);
    REQUIRE(r.verification.passed);
    for (std::size_t i = 0; i + 1 < r.attempts.size(); ++i) {
        CHECK(r.attempts[i].depth == i);
        CHECK_FALSE(r.attempts[i].success);
    }
    const vla::VerificationReport again = vla::reverify(p, r, {}, req.fidelity_min);
    CHECK(again.energy == doctest::Approx(r.energy).epsilon(1e-12));
    CHECK(again.passed);
}

TEST_CASE("driver multiply at fixed depth with zero start") {
    PauliSum id(2);
    id.add(1.0, "II");
    const Problem p = vla::make_problem(Task::Multiply, id, Circuit(2));
    vla::SolveRequest req;
    req.depth = 1;
    const vla::SolveReport r = vla::run_solve(p, req);
    CHECK(r.optimizer == "vqe");
    CHECK(r.depth == 1);
    CHECK(r.trace.steps == 0);
    CHECK(r.verification.fidelity == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("driver vqe and ite both reach the two-by-two multiply optimum") {
    const Problem p = m2_problem(Task::Multiply);
    for (const char* opt : {"vqe", "ite"}) {
        CAPTURE(opt);
        vla::SolveRequest req;
        req.optimizer = opt;
        req.depth = 0;
        req.theta0 = {0.3, -0.2};
        const vla::SolveReport r = vla::run_solve(p, req);
        CHECK(r.verification.passed);
        const oracle::Vec target = oracle::sum_matrix(m2_sum()) * zero_state(1);
        CHECK(oracle::fidelity(oracle::to_vec(vla::report_state(p, r)), target / target.norm()) >= 0.99);
    }
}

TEST_CASE("driver rejects bad requests") {
    const Problem p = m2_problem(Task::Solve);
    vla::SolveRequest req;
    req.optimizer = "newton";
    CHECK_THROWS_AS((void)vla::run_solve(p, req), std::invalid_argument);
    req.optimizer = "vqe";
    req.depth = 0;
    req.theta0 = {0.1};
    CHECK_THROWS_AS((void)vla::run_solve(p, req), std::invalid_argument);
    req.theta0.clear();
    req.fidelity_min = 1.5;
    CHECK_THROWS_AS((void)vla::run_solve(p, req), std::invalid_argument);

    req.fidelity_min = 0.99;
    vla::SolveReport r = vla::run_solve(p, req);
    r.theta.push_back(0.0);
    CHECK_THROWS_AS((void)vla::reverify(p, r, {}, 0.99), std::invalid_argument);
    CHECK_THROWS_AS((void)vla::report_state(p, r), std::invalid_argument);
    r.theta.pop_back();
    CHECK_THROWS_AS((void)vla::reverify(m2_problem(Task::Multiply), r, {}, 0.99), std::invalid_argument);
}
