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

#include "oracles.hpp"
#include "vla/statevec.hpp"

using vla::Circuit;
using vla::Complex;
using vla::StateVector;

namespace {

double max_diff(const oracle::Vec& a, const oracle::Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("single gates") {
    SUBCASE("Ry(0) leaves a state unchanged") {
        std::mt19937_64 rng(1);
        const auto v = oracle::random_complex(4, 1, rng);
        StateVector s = StateVector::from_eigen(v / v.norm());
        const StateVector before = s;
        vla::apply_gate(s, {vla::GateKind::Ry, 1, std::nullopt, std::nullopt, 0.0}, 0.0);
        CHECK(max_diff(oracle::to_vec(s), oracle::to_vec(before)) == 0.0);
    }
    SUBCASE("Ry(a)|0> = (cos a/2, sin a/2)") {
        for (double a : {0.3, -1.2, 2.9}) {
            StateVector s(1);
            vla::apply_gate(s, {vla::GateKind::Ry, 0, std::nullopt, std::nullopt, 0.0}, a);
            CHECK(std::abs(s[0] - std::cos(a / 2)) < 1e-15);
            CHECK(std::abs(s[1] - std::sin(a / 2)) < 1e-15);
            CHECK(std::abs(vla::inner_product(StateVector(1), s) - std::cos(a / 2)) < 1e-15);
        }
    }
    SUBCASE("exp(+i a Y/2)|0> at a = 0.6435 is the normalized two-by-two solution") {
        Circuit c(1);
        c.ry_fixed(0, -0.6435);
        const StateVector s = vla::prepare_state(c, {});
        CHECK(s[0].real() == doctest::Approx(0.9487).epsilon(1e-4));
        CHECK(s[1].real() == doctest::Approx(-0.3162).epsilon(1e-4));
    }
    SUBCASE("inner products of basis states") {
        CHECK(vla::inner_product(StateVector::basis(1, 0), StateVector::basis(1, 1)) == Complex(0.0));
        CHECK(vla::inner_product(StateVector::basis(2, 3), StateVector::basis(2, 3)) == Complex(1.0));
        CHECK_THROWS_AS((void)vla::inner_product(StateVector(1), StateVector(2)), std::invalid_argument);
    }
    SUBCASE("range checks") {
        StateVector s(2);
        CHECK_THROWS_AS(vla::apply_gate(s, {vla::GateKind::Ry, 2, std::nullopt, std::nullopt, 0.0}, 0.1),
                        std::out_of_range);
        CHECK_THROWS(StateVector(0));
        CHECK_THROWS(StateVector(31));
        Circuit c(2);
        CHECK_THROWS(c.cnot(1, 1));
    }
}

TEST_CASE("gate kernels agree with dense matrices (property)") {
    std::mt19937_64 rng(77);
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::size_t m = 0; m <= 2; ++m) {
            for (auto place : {vla::PrefixPlacement::First, vla::PrefixPlacement::Last}) {
                const Circuit prefix = oracle::random_prep(n, rng);
                Circuit c = vla::build_hardware_ansatz(n, m, prefix, place);
                c.pauli('Y', n - 1);
                const auto theta = oracle::random_angles(c.parameter_count(), rng);
                const StateVector s = vla::prepare_state(c, theta);
                CHECK(max_diff(oracle::to_vec(s), oracle::circuit_state(c, theta)) < 1e-12);
                CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("Pauli strings and sums") {
    std::mt19937_64 rng(4);
    const char letters[] = "IXYZ";
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto dim = Eigen::Index(1) << n;
        const oracle::Vec v = oracle::random_complex(dim, 1, rng);
        std::string w;
        for (std::size_t q = 0; q < n; ++q) w += letters[rng() % 4];
        StateVector s = StateVector::from_eigen(v);
        s.apply_pauli(w);
        CHECK(max_diff(oracle::to_vec(s), oracle::pauli_string(w) * v) < 1e-13);
        CHECK(std::abs(vla::pauli_matrix_element(StateVector::from_eigen(v), w, StateVector::from_eigen(v)) -
                       v.dot(oracle::pauli_string(w) * v)) < 1e-12);
    }
    SUBCASE("named examples") {
        const StateVector s = StateVector::basis(2, 2);
        CHECK(max_diff(oracle::to_vec(vla::apply_pauli_sum(s, vla::PauliSum::identity(2))), oracle::to_vec(s)) == 0.0);

        vla::PauliSum z(1);
        z.add(1.0, "Z");
        const StateVector one = vla::apply_pauli_sum(StateVector::basis(1, 1), z);
        CHECK(one[1] == Complex(-1.0));

        vla::PauliSum small(1);
        small.add(1.5, "I");
        small.add(Complex(0, -0.5), "Y");
        const StateVector r = vla::apply_pauli_sum(StateVector(1), small);
        CHECK(std::abs(r[0] - 1.5) < 1e-15);
        CHECK(std::abs(r[1] - 0.5) < 1e-15);
        CHECK_THROWS_AS((void)vla::apply_pauli_sum(StateVector(1), vla::PauliSum(1)), std::invalid_argument);
    }
}

TEST_CASE("hardware ansatz structure") {
    const Circuit a = vla::build_hardware_ansatz(1, 0);
    CHECK(a.parameter_count() == 2);
    CHECK(a.cnot_count() == 0);
    const Circuit b = vla::build_hardware_ansatz(3, 2);
    CHECK(b.parameter_count() == 14);
    CHECK(b.cnot_count() == 2 * 2 + 2);
    const std::vector<double> zero(b.parameter_count(), 0.0);
    const StateVector s = vla::prepare_state(b, zero);
    CHECK(std::abs(s[0] - 1.0) < 1e-15);
    CHECK_THROWS_AS((void)vla::prepare_state(b, std::vector<double>(3)), std::invalid_argument);

    SUBCASE("zero angles at depth 1 preserve any prefix state") {
        std::mt19937_64 rng(3);
        const Circuit prefix = oracle::random_prep(3, rng);
        const Circuit c = vla::build_hardware_ansatz(3, 1, prefix);
        const StateVector p = vla::prepare_state(c, std::vector<double>(c.parameter_count(), 0.0));
        CHECK(oracle::fidelity(oracle::to_vec(p), oracle::circuit_state(prefix, {})) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("zero angles at depth 2 leave one net CNOT chain") {
        Circuit prefix(3);
        prefix.pauli('X', 0);
        prefix.pauli('X', 2);
        const Circuit c = vla::build_hardware_ansatz(3, 2, prefix);
        const StateVector p = vla::prepare_state(c, std::vector<double>(c.parameter_count(), 0.0));
        // |101> -> CNOT(0,1) -> |111> -> CNOT(1,2) -> |110>
        CHECK(std::abs(p[0b110]) == doctest::Approx(1.0));
    }
    SUBCASE("prefix placed last is reproduced exactly at zero angles") {
        std::mt19937_64 rng(9);
        const Circuit prefix = oracle::random_prep(3, rng);
        const Circuit c = vla::build_hardware_ansatz(3, 2, prefix, vla::PrefixPlacement::Last);
        const StateVector p = vla::prepare_state(c, std::vector<double>(c.parameter_count(), 0.0));
        CHECK(oracle::fidelity(oracle::to_vec(p), oracle::circuit_state(prefix, {})) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("inverse ranges undo forward ranges") {
    std::mt19937_64 rng(12);
    const Circuit c = vla::build_hardware_ansatz(3, 2, oracle::random_prep(3, rng));
    const auto theta = oracle::random_angles(c.parameter_count(), rng);
    StateVector s(3);
    vla::apply_range(s, c, theta, 0, c.gates().size());
    vla::apply_inverse_range(s, c, theta, 0, c.gates().size());
    CHECK(std::abs(s[0] - 1.0) < 1e-12);
}

TEST_CASE("derivative states match finite differences (property)") {
    std::mt19937_64 rng(21);
    const double h = 1e-4;
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::size_t m = 0; m <= 3; ++m) {
            if (n == 1 && m > 0) continue;
            const Circuit c = vla::build_hardware_ansatz(n, m, oracle::random_prep(n, rng));
            auto theta = oracle::random_angles(c.parameter_count(), rng);
            const oracle::Vec phi = oracle::circuit_state(c, theta);
            for (std::size_t i = 0; i < c.parameter_count(); ++i) {
                const auto terms = vla::derivative_state(c, theta, i);
                REQUIRE(terms.size() == 1);
                CHECK(terms[0].weight == Complex(0, -0.5));
                oracle::Vec analytic = oracle::Vec::Zero(phi.size());
                for (const auto& t : terms) analytic += t.weight * oracle::to_vec(t.state);
                const double keep = theta[i];
                theta[i] = keep + h;
                const oracle::Vec up = oracle::circuit_state(c, theta);
                theta[i] = keep - h;
                const oracle::Vec down = oracle::circuit_state(c, theta);
                theta[i] = keep;
                CHECK(max_diff(analytic, (up - down) / (2 * h)) < 1e-6);
                CHECK(std::abs(phi.dot(analytic).real()) < 1e-12);
            }
        }
    }
    SUBCASE("one-qubit Ry: the term is Y Ry(a)|0>") {
        Circuit c(1);
        c.ry(0, 0);
        const std::vector<double> a{0.7};
        const auto terms = vla::derivative_state(c, a, 0);
        REQUIRE(terms.size() == 1);
        CHECK(terms[0].letter == 'Y');
        const oracle::Vec expect = oracle::pauli2('Y') * oracle::rotation('Y', 0.7).col(0);
        CHECK(max_diff(oracle::to_vec(terms[0].state), expect) < 1e-14);
    }
    SUBCASE("invalid slot") {
        const Circuit c = vla::build_hardware_ansatz(1, 0);
        CHECK_THROWS((void)vla::derivative_state(c, std::vector<double>(2), 2));
    }
}
