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

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "vla/pauli.hpp"
#include "vla/statevec.hpp"

namespace vla {

enum class Task { Multiply, Solve };

[[nodiscard]] std::string to_string(Task task);
[[nodiscard]] Task task_from_string(const std::string& name);

struct ProblemMetadata {
    std::optional<double> kappa;          ///< condition number, when known
    std::optional<double> spectral_norm;  ///< largest |eigenvalue|, when known
    std::uint64_t seed = 0;
    /// Accept a non-Hermitian M for Solve. H = M^dag (I - |v0><v0|) M keeps
    /// M^-1|v0> as its zero-energy ground state for any invertible M.
    bool allow_non_hermitian = false;
};

/**
 * A linear-algebra task: M as a Pauli sum and |v0> = U_v0 |0...0> given by a
 * parameter-free preparation circuit (empty circuit means |0...0>).
 */
struct Problem {
    Task task = Task::Solve;
    PauliSum matrix;
    Circuit v0_prep;
    ProblemMetadata metadata;

    [[nodiscard]] std::size_t qubit_count() const noexcept { return matrix.qubit_count(); }
    [[nodiscard]] StateVector v0() const;
};

/// Validates dimensions and, for Solve, hermiticity unless explicitly waived
/// (error text points at the standard one-ancilla Hermitian embedding).
Problem make_problem(Task task, PauliSum matrix, Circuit v0_prep, ProblemMetadata metadata = {});

/// Canonical Pauli form of H_M = I - M|v0><v0|M^dag / ||M v0||^2 (dense route, n <= 12).
[[nodiscard]] PauliSum multiply_hamiltonian(const Problem& p);
/// Canonical Pauli form of H_{M^-1} = M^dag (I - |v0><v0|) M (dense route, n <= 12).
[[nodiscard]] PauliSum solve_hamiltonian(const Problem& p);

/// M(s) = (1 - s) I + s M for s in [0, 1].
[[nodiscard]] PauliSum interpolate_matrix(const PauliSum& m, double s);

}  // namespace vla
