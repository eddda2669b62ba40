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

// Shared problem fixtures for the unit and acceptance tests.

#pragma once

#include "oracles.hpp"
#include "vla/estimator.hpp"

namespace fixture {

using vla::Circuit;
using vla::Complex;
using vla::EstimatorConfig;
using vla::EstimatorMode;
using vla::PauliSum;
using vla::Problem;
using vla::Task;

inline PauliSum m2_sum() {
    PauliSum s(1);
    s.add(1.5, "I");
    s.add(Complex(0, -0.5), "Y");
    return s;
}

inline Problem m2_problem(Task task) {
    vla::ProblemMetadata meta;
    meta.allow_non_hermitian = true;
    return vla::make_problem(task, m2_sum(), Circuit(), meta);
}

inline Circuit single_ry() {
    Circuit c(1);
    c.ry(0, 0);
    return c;
}

inline EstimatorConfig mode(EstimatorMode m) {
    EstimatorConfig cfg;
    cfg.mode = m;
    return cfg;
}

// Closed forms in the exp(-i a Y/2) convention.
inline double m2_energy(double a) { return 1.25 - std::cos(a) + 0.75 * std::sin(a); }
inline double m2_gradient(double a) { return std::sin(a) + 0.75 * std::cos(a); }

struct Instance {
    Problem problem;
    Circuit ansatz;
    std::vector<double> theta;
    oracle::Mat m;
    oracle::Vec v0;
};

inline Instance random_instance(Task task, std::size_t n, std::size_t depth, std::mt19937_64& rng) {
    const auto dim = Eigen::Index(1) << n;
    oracle::Mat m = task == Task::Solve ? oracle::random_hpd(dim, 8.0, rng) : oracle::random_complex(dim, dim, rng);
    const Circuit prep = oracle::random_prep(n, rng);
    Problem p = vla::make_problem(task, vla::decompose_dense(m), prep);
    Circuit ansatz = vla::build_hardware_ansatz(n, depth);
    auto theta = oracle::random_angles(ansatz.parameter_count(), rng);
    return {std::move(p), std::move(ansatz), std::move(theta), m, oracle::circuit_state(prep, {})};
}

inline double oracle_energy(const Instance& in, const std::vector<double>& theta) {
    const oracle::Vec phi = oracle::circuit_state(in.ansatz, theta);
    if (in.problem.task == Task::Multiply) {
        const oracle::Vec w = in.m * in.v0;
        return 1.0 - std::norm(phi.dot(w)) / w.squaredNorm();
    }
    const oracle::Vec u = in.m * phi;
    return u.squaredNorm() - std::norm(in.v0.dot(u));
}

}  // namespace fixture
