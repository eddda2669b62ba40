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

#include "vla/problem.hpp"

#include <stdexcept>

namespace vla {

std::string to_string(Task task) { return task == Task::Multiply ? "multiply" : "solve"; }

Task task_from_string(const std::string& name) {
    if (name == "multiply") return Task::Multiply;
    if (name == "solve") return Task::Solve;
    throw std::invalid_argument("unknown task '" + name + "'");
}

StateVector Problem::v0() const {
    StateVector s(qubit_count());
    apply_range(s, v0_prep, {}, 0, v0_prep.gates().size());
    return s;
}

Problem make_problem(Task task, PauliSum matrix, Circuit v0_prep, ProblemMetadata metadata) {
    if (matrix.empty()) throw std::invalid_argument("problem matrix has no terms");
    if (v0_prep.parameter_count() != 0) throw std::invalid_argument("v0 preparation must be parameter-free");
    if (v0_prep.qubit_count() == 0) v0_prep = Circuit(matrix.qubit_count());
    if (v0_prep.qubit_count() != matrix.qubit_count()) {
        throw std::invalid_argument("v0 circuit acts on " + std::to_string(v0_prep.qubit_count()) +
                                    " qubits but the matrix on " + std::to_string(matrix.qubit_count()));
    }
    if (task == Task::Solve && !metadata.allow_non_hermitian && !matrix.is_hermitian(1e-10)) {
        throw std::invalid_argument(
            "solve requires a Hermitian matrix; embed a general A as [[0, A], [A^dag, 0]] on one extra qubit "
            "and solve for the right-hand side |1>|b>");
    }
    return Problem{task, std::move(matrix), std::move(v0_prep), metadata};
}

PauliSum multiply_hamiltonian(const Problem& p) {
    const DenseMatrix m = pauli_to_matrix(p.matrix);
    const DenseVector w = m * p.v0().to_eigen();
    const double n2 = w.squaredNorm();
    if (n2 < 1e-24) throw DegenerateProblem("M|v0> vanishes");
    const auto dim = m.rows();
    const DenseMatrix h = DenseMatrix::Identity(dim, dim) - w * w.adjoint() / n2;
    return decompose_dense(h);
}

PauliSum solve_hamiltonian(const Problem& p) {
    const DenseMatrix m = pauli_to_matrix(p.matrix);
    const DenseVector v = p.v0().to_eigen();
    const auto dim = m.rows();
    const DenseMatrix proj = DenseMatrix::Identity(dim, dim) - v * v.adjoint();
    return decompose_dense(m.adjoint() * proj * m);
}

PauliSum interpolate_matrix(const PauliSum& m, double s) {
    PauliSum out = PauliSum::identity(m.qubit_count(), 1.0 - s);
    out += m.scaled(s);
    return canonicalize(out);
}

}  // namespace vla
