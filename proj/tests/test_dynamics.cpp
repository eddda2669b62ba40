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

#include <sstream>

#include <json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "fixtures.hpp"
#include "vla/bench.hpp"
#include "vla/dynamics.hpp"

using namespace fixture;
using vla::EvolutionSpec;

namespace {

// Rz(pi/2) Ry(a) Rz(-pi/2) is an X rotation; then a general Ry, Rz.
Circuit one_qubit_ansatz() {
    Circuit c(1);
    c.rz_fixed(0, M_PI / 2);
    c.ry(0, 0);
    c.rz_fixed(0, -M_PI / 2);
    c.ry(0, 1);
    c.rz(0, 2);
    return c;
}

PauliSum lowering() {
    PauliSum s(1);
    s.add(0.5, "X");
    s.add(Complex(0, 0.5), "Y");
    return s;
}

PauliSum two_qubit_h() {
    PauliSum h(2);
    h.add(1.0, "ZZ");
    h.add(0.5, "XI");
    return h;
}

// Dense RK4 of d rho/dt = -i[H, rho] + sum L rho L^dag - (1/2){L^dag L, rho}.
oracle::Mat lindblad(const oracle::Mat& h, const std::vector<oracle::Mat>& ls, oracle::Mat rho, double t,
                     int steps) {
    auto rhs = [&](const oracle::Mat& r) {
        oracle::Mat d = Complex(0, -1) * (h * r - r * h);
        for (const auto& l : ls) {
            const oracle::Mat ll = l.adjoint() * l;
            d += l * r * l.adjoint() - 0.5 * (ll * r + r * ll);
        }
        return d;
    };
    const double dt = t / steps;
    for (int k = 0; k < steps; ++k) {
        const oracle::Mat k1 = rhs(rho);
        const oracle::Mat k2 = rhs(rho + 0.5 * dt * k1);
        const oracle::Mat k3 = rhs(rho + 0.5 * dt * k2);
        const oracle::Mat k4 = rhs(rho + dt * k3);
        rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

double trace_distance(const oracle::Mat& a, const oracle::Mat& b) {
    const Eigen::SelfAdjointEigenSolver<oracle::Mat> es(a - b);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

TEST_CASE("evolution spec validation") {
    EvolutionSpec s;
    s.hamiltonian = two_qubit_h();
    s.total_time = 0.5;
    s.dt = 0.01;
    CHECK(s.step_count() == 50);
    CHECK_NOTHROW(s.validate());
    s.dt = 0.03;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.dt = -0.1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.dt = 0.01;
    s.hamiltonian.add(Complex(0, 1), "XX");
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.hamiltonian = two_qubit_h();
    s.jumps.push_back(lowering());
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("real-time evolution") {
    SUBCASE("zero Hamiltonian leaves the state alone") {
        EvolutionSpec s;
        s.hamiltonian = PauliSum(2);
        s.total_time = 0.2;
        s.dt = 0.02;
        std::mt19937_64 rng(3);
        const Circuit a = vla::build_hardware_ansatz(2, 1);
        const auto theta0 = oracle::random_angles(a.parameter_count(), rng);
        const auto rec = vla::real_time_evolve(s, a, theta0);
        REQUIRE(rec.steps.size() == 10);
        for (const auto& th : rec.thetas) CHECK(th == theta0);
        for (const auto& st : rec.steps) {
            CHECK(st.optimizer_steps == 0);
            CHECK(*st.exact_fidelity == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("one qubit under X") {
        EvolutionSpec s;
        s.hamiltonian = PauliSum(1);
        s.hamiltonian.add(1.0, "X");
        s.total_time = 1.0;
        s.dt = 0.01;
        const Circuit a = one_qubit_ansatz();
        const auto rec = vla::real_time_evolve(s, a, std::vector<double>{0.0, 0.0, 0.0});
        const oracle::Mat u = (Complex(0, -1) * oracle::pauli2('X')).exp();
        const oracle::Vec target = u.col(0);
        const double f = oracle::fidelity(oracle::circuit_state(a, rec.thetas.back()), target);
        CHECK(f >= 0.99);
        CHECK(*rec.steps.back().exact_fidelity == doctest::Approx(f).epsilon(1e-10));
    }
    SUBCASE("two-qubit Ising term with transverse field") {
        EvolutionSpec s;
        s.hamiltonian = two_qubit_h();
        s.total_time = 0.5;
        s.dt = 0.01;
        std::mt19937_64 rng(5);
        const Circuit a = vla::build_hardware_ansatz(2, 2);
        const auto theta0 = oracle::random_angles(a.parameter_count(), rng);
        const auto rec = vla::real_time_evolve(s, a, theta0);
        const oracle::Mat u = (Complex(0, -0.5) * oracle::sum_matrix(two_qubit_h())).exp();
        const oracle::Vec target = u * oracle::circuit_state(a, theta0);
        CHECK(oracle::fidelity(oracle::circuit_state(a, rec.thetas.back()), target) >= 0.99);
        for (const auto& st : rec.steps) {
            CHECK(st.step_fidelity >= s.step_fidelity_min);
            CHECK(st.evaluations > 0);
            REQUIRE(st.local_fidelity.has_value());
            CHECK(*st.local_fidelity > 0.999);
        }
        CHECK(rec.accumulated_infidelity() > 0.0);

        std::ostringstream csv;
        rec.write_csv(csv);
        CHECK(csv.str().rfind("t,fidelity,jump_flag,channel,energy,evaluations\n", 0) == 0);
        const auto j = nlohmann::json::parse(rec.summary_json());
        CHECK(j["schema"] == 1);
        CHECK(j["steps"] == 50);
        CHECK(j["jump_times"].empty());
    }
    SUBCASE("step failure is reported") {
        // A depth-0 product ansatz cannot follow entangling dynamics.
        EvolutionSpec s;
        s.hamiltonian = PauliSum(2);
        s.hamiltonian.add(1.0, "XX");
        s.total_time = 1.0;
        s.dt = 0.05;
        s.step_fidelity_min = 0.99999;
        const Circuit a = vla::build_hardware_ansatz(2, 0);
        CHECK_THROWS_AS(vla::real_time_evolve(s, a, std::vector<double>(a.parameter_count(), 0.0)), vla::StepFailure);
    }
}

TEST_CASE("imaginary-time evolution") {
    SUBCASE("Z from |+> reaches |1>") {
        EvolutionSpec s;
        s.hamiltonian = PauliSum(1);
        s.hamiltonian.add(1.0, "Z");
        s.total_time = 5.0;
        s.dt = 0.05;
        const Circuit a = single_ry();
        const auto rec = vla::imag_time_evolve(s, a, std::vector<double>{M_PI / 2});
        const oracle::Vec one = oracle::Vec::Unit(2, 1);
        CHECK(oracle::fidelity(oracle::circuit_state(a, rec.thetas.back()), one) >= 0.99);

        // <Z> never rises by more than the per-step solver tolerance.
        double prev = 0.0;
        for (std::size_t k = 1; k < rec.thetas.size(); ++k) {
            const oracle::Vec phi = oracle::circuit_state(a, rec.thetas[k]);
            const double z = std::norm(phi(0)) - std::norm(phi(1));
            CHECK(z <= prev + 1e-3);
            prev = z;
        }
    }
    SUBCASE("zero Hamiltonian") {
        EvolutionSpec s;
        s.hamiltonian = PauliSum(1);
        s.total_time = 1.0;
        s.dt = 0.1;
        const auto rec = vla::imag_time_evolve(s, single_ry(), std::vector<double>{0.7});
        CHECK(rec.thetas.back()[0] == 0.7);
    }
}

TEST_CASE("quantum jumps") {
    const Circuit a = single_ry();
    SUBCASE("lowering operator on |1>") {
        const auto next = vla::quantum_jump_apply(a, std::vector<double>{M_PI}, lowering(), vla::OptimizerConfig{});
        CHECK(oracle::fidelity(oracle::circuit_state(a, next), oracle::Vec::Unit(2, 0)) >= 0.999);
    }
    SUBCASE("lowering operator on |0> annihilates") {
        CHECK_THROWS_AS(vla::quantum_jump_apply(a, std::vector<double>{0.0}, lowering(), vla::OptimizerConfig{}),
                        vla::DegenerateProblem);
    }
    SUBCASE("identity keeps the state") {
        const auto next =
            vla::quantum_jump_apply(a, std::vector<double>{1.1}, PauliSum::identity(1), vla::OptimizerConfig{});
        CHECK(next[0] == doctest::Approx(1.1).epsilon(1e-12));
    }
}

TEST_CASE("trajectories") {
    SUBCASE("no jump operators matches real-time evolution") {
        EvolutionSpec s;
        s.hamiltonian = two_qubit_h();
        s.total_time = 0.1;
        s.dt = 0.01;
        std::mt19937_64 rng(5);
        const Circuit a = vla::build_hardware_ansatz(2, 2);
        const auto theta0 = oracle::random_angles(a.parameter_count(), rng);
        const auto r1 = vla::real_time_evolve(s, a, theta0);
        std::mt19937_64 g(1);
        const auto r2 = vla::trajectory_run(s, a, theta0, g);
        REQUIRE(r1.thetas.size() == r2.thetas.size());
        for (std::size_t k = 0; k < r1.thetas.size(); ++k) CHECK(r1.thetas[k] == r2.thetas[k]);
        CHECK(r2.jump_times().empty());
    }
    SUBCASE("jump probability above one is rejected") {
        EvolutionSpec s;
        s.hamiltonian = PauliSum(1);
        s.jumps.push_back(lowering().scaled(4.0));
        s.total_time = 0.1;
        s.dt = 0.1;
        std::mt19937_64 g(1);
        CHECK_THROWS_AS(vla::trajectory_run(s, single_ry(), std::vector<double>{M_PI}, g), std::invalid_argument);
    }
    SUBCASE("amplitude damping follows the decay law") {
        EvolutionSpec s;
        s.hamiltonian = PauliSum(1);
        s.jumps.push_back(lowering());  // gamma = 1
        s.total_time = 1.0;
        s.dt = 0.01;
        const Circuit a = single_ry();
        const std::size_t trials = 500;
        std::vector<double> p_half(trials), p_one(trials);
        std::vector<std::size_t> jumps(trials);
        vla::parallel_for(trials, [&](std::size_t i) {
            std::mt19937_64 g(vla::derive_seed(2026, i));
            const auto rec = vla::trajectory_run(s, a, std::vector<double>{M_PI}, g);
            auto excited = [&](std::size_t k) { return std::norm(oracle::circuit_state(a, rec.thetas[k])(1)); };
            p_half[i] = excited(50);
            p_one[i] = excited(100);
            jumps[i] = rec.jump_times().size();
        });
        for (auto [t, v] : {std::pair{0.5, &p_half}, std::pair{1.0, &p_one}}) {
            double mean = 0.0;
            for (double p : *v) mean += p;
            mean /= trials;
            const double expect = std::exp(-t);
            const double sigma = std::sqrt(expect * (1.0 - expect) / trials);
            CAPTURE(t);
            CHECK(std::abs(mean - expect) < 3.0 * sigma);
        }
        for (auto j : jumps) CHECK(j <= 1);
    }
    SUBCASE("driven damped qubit against the master equation") {
        EvolutionSpec s;
        s.hamiltonian = PauliSum(1);
        s.hamiltonian.add(0.5, "X");
        s.jumps.push_back(lowering().scaled(std::sqrt(0.5)));
        s.total_time = 1.0;
        s.dt = 0.01;
        s.track_exact = false;
        const Circuit a = one_qubit_ansatz();
        const std::vector<double> theta0{M_PI, 0.0, 0.0};
        const std::size_t trials = 1000;
        std::vector<oracle::Mat> rhos(trials);
        vla::parallel_for(trials, [&](std::size_t i) {
            std::mt19937_64 g(vla::derive_seed(77, i));
            const auto rec = vla::trajectory_run(s, a, theta0, g);
            const oracle::Vec phi = oracle::circuit_state(a, rec.thetas.back());
            rhos[i] = phi * phi.adjoint();
        });
        oracle::Mat rho = oracle::Mat::Zero(2, 2);
        for (const auto& r : rhos) rho += r;
        rho /= static_cast<double>(trials);
        const oracle::Vec psi0 = oracle::circuit_state(a, theta0);
        const oracle::Mat exact = lindblad(oracle::sum_matrix(s.hamiltonian), {oracle::sum_matrix(s.jumps[0])},
                                           psi0 * psi0.adjoint(), 1.0, 1000);
        CHECK(trace_distance(rho, exact) < 0.05);
    }
}

TEST_CASE("dense propagator") {
    const oracle::Mat h = oracle::sum_matrix(two_qubit_h());
    std::mt19937_64 rng(1);
    const oracle::Vec psi = oracle::random_complex(4, 1, rng).col(0).normalized();
    const oracle::Vec a = vla::dense_evolve(two_qubit_h(), psi, 0.7);
    const oracle::Vec b = (Complex(0, -0.7) * h).exp() * psi;
    CHECK((a - b).norm() < 1e-12);
    const oracle::Vec c = vla::dense_evolve(two_qubit_h(), psi, 0.7, true);
    const oracle::Vec d = ((-0.7) * h).exp() * psi;
    CHECK((c - d.normalized()).norm() < 1e-12);
}
