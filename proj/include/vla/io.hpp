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
 * File formats: Matrix Market and JSON matrices, Pauli-sum text, circuit JSON
 * and state CSV dumps.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "vla/pauli.hpp"
#include "vla/problem.hpp"
#include "vla/statevec.hpp"

namespace vla::io {

/// Malformed or unreadable input; the message names the source and line when known.
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/**
 * Matrix Market reader. Accepts `coordinate` (1-indexed) and `array` layouts
 * with real, integer, complex or pattern fields and general, symmetric,
 * skew-symmetric or hermitian storage. Duplicate coordinates are summed.
 */
[[nodiscard]] SparseMatrix read_matrix_market(std::istream& in, const std::string& source = "<stream>");
/// Coordinate complex general layout, 17 significant digits.
void write_matrix_market(std::ostream& out, const SparseMatrix& m);

/**
 * JSON matrix: {"n": N, "entries": [[row, col, re, im], ...]} with 0-based
 * indices, or {"pauli": [[re, im, "LETTERS"], ...]}. Optional
 * "allow_non_hermitian", "kappa" and "spectral_norm" fill the metadata.
 */
struct MatrixDocument {
    PauliSum matrix;
    ProblemMetadata metadata;
};
[[nodiscard]] MatrixDocument read_matrix_json(std::istream& in, const std::string& source = "<stream>");
void write_matrix_json(std::ostream& out, const SparseMatrix& m, const ProblemMetadata& meta = {});

/// One term per line, "re im LETTERS"; '#' starts a comment.
[[nodiscard]] PauliSum read_pauli_text(std::istream& in, const std::string& source = "<stream>");
void write_pauli_text(std::ostream& out, const PauliSum& s);

/// Dispatch on extension: .mtx, .json, otherwise Pauli text. Sparse inputs are
/// padded to a power of two and decomposed element-wise, then canonicalized.
[[nodiscard]] MatrixDocument load_matrix(const std::filesystem::path& path);

/// {"qubits": n, "parameters": L, "gates": [{"kind", "target", "control", "slot", "angle"}]}
[[nodiscard]] Circuit read_circuit_json(std::istream& in, const std::string& source = "<stream>");
[[nodiscard]] Circuit load_circuit(const std::filesystem::path& path);
void write_circuit_json(std::ostream& out, const Circuit& c);

/// Columns: index,re,im
void write_state_csv(std::ostream& out, const StateVector& s);

}  // namespace vla::io
