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
 * Pauli strings, linear combinations of Pauli strings, sparse coordinate
 * matrices and their decomposition into Pauli sums, and importance sampling
 * over the terms of a sum.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "vla/types.hpp"

namespace vla {

/// Largest qubit count for which dense 2^n x 2^n matrices are materialized.
inline constexpr std::size_t kDenseQubitCap = 12;

/// Coefficients below this magnitude are dropped by canonicalize().
inline constexpr double kPruneThreshold = 1e-14;

/**
 * A complex-weighted tensor product of single-qubit Pauli operators.
 *
 * Letter k acts on qubit k; qubit 0 is the most significant bit of a basis
 * index, so the string "XZ" is the Kronecker product X (x) Z.
 */
struct PauliTerm {
    Complex coefficient{1.0, 0.0};
    std::string letters;

    PauliTerm() = default;
    PauliTerm(Complex coeff, std::string word);

    [[nodiscard]] std::size_t qubit_count() const noexcept { return letters.size(); }
    [[nodiscard]] bool is_identity() const noexcept;
};

/// Bit masks describing how a Pauli string acts on a computational basis state.
struct PauliMasks {
    std::uint64_t flip = 0;   ///< bits flipped (X or Y)
    std::uint64_t phase = 0;  ///< bits contributing (-1)^b (Y or Z)
    int y_count = 0;          ///< number of Y letters, contributes i^y_count
};

[[nodiscard]] PauliMasks masks_of(std::string_view letters);

/// Product of two Pauli strings: returns (phase, letters) with a*b = phase * letters.
[[nodiscard]] std::pair<Complex, std::string> multiply_letters(std::string_view a, std::string_view b);

/// Linear combination sum_j lambda_j sigma_j of Pauli strings on a fixed register.
class PauliSum {
  public:
    PauliSum() = default;
    explicit PauliSum(std::size_t qubits);
    PauliSum(std::size_t qubits, std::vector<PauliTerm> terms);

    static PauliSum identity(std::size_t qubits, Complex scale = 1.0);

    void add(PauliTerm term);
    void add(Complex coeff, std::string letters) { add(PauliTerm{coeff, std::move(letters)}); }

    [[nodiscard]] std::size_t qubit_count() const noexcept { return qubits_; }
    [[nodiscard]] const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
    [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }

    /// C = sum_j |lambda_j|, accumulated with compensated summation.
    [[nodiscard]] double one_norm() const;

    /// True when every coefficient is real to within tol (Hermitian operator).
    [[nodiscard]] bool is_hermitian(double tol = 1e-12) const;

    [[nodiscard]] PauliSum adjoint() const;
    [[nodiscard]] PauliSum scaled(Complex factor) const;

    PauliSum& operator+=(const PauliSum& other);
    friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
    friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

  private:
    std::size_t qubits_ = 0;
    std::vector<PauliTerm> terms_;
};

/// Merges equal letter strings, prunes |coeff| < 1e-14, sorts lexicographically.
[[nodiscard]] PauliSum canonicalize(const PauliSum& sum);

/// Dense matrix of the sum; oracle use only (n <= kDenseQubitCap).
[[nodiscard]] DenseMatrix pauli_to_matrix(const PauliSum& sum);

/// Pauli decomposition of a dense 2^n x 2^n matrix by trace projection.
[[nodiscard]] PauliSum decompose_dense(const DenseMatrix& m);

/**
 * Coordinate-list complex matrix.
 *
 * Entries are unique and in range; at least one entry is nonzero. A dimension
 * that is not a power of two is addressed by ceil(log2 N) qubits.
 */
class SparseMatrix {
  public:
    struct Entry {
        std::size_t row = 0;
        std::size_t col = 0;
        Complex value{};
    };

    SparseMatrix(std::size_t dimension, std::vector<Entry> entries);

    static SparseMatrix from_dense(const DenseMatrix& m, double drop_below = 0.0);

    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
    [[nodiscard]] std::size_t qubit_count() const noexcept;
    [[nodiscard]] const std::vector<Entry>& entries() const noexcept { return entries_; }

    /// Sum of |M_xy| over stored entries, compensated summation.
    [[nodiscard]] double abs_sum() const;

    /// Square matrix of dimension 2^qubit_count() with identity on padded indices.
    [[nodiscard]] SparseMatrix padded_to_register() const;

    [[nodiscard]] DenseMatrix to_dense() const;

  private:
    std::size_t dimension_;
    std::vector<Entry> entries_;
};

/**
 * Expands every entry M_xy |x><y| into its 2^n Pauli strings using
 * |0><0| = (I+Z)/2, |0><1| = (X+iY)/2, |1><0| = (X-iY)/2, |1><1| = (I-Z)/2.
 * The result is not canonicalized; its one-norm equals sum |M_xy|.
 */
[[nodiscard]] PauliSum decompose_elementwise(const SparseMatrix& m);

/// Draws term j with probability |lambda_j| / C.
class LcuSampler {
  public:
    struct Draw {
        std::size_t index;
        Complex phase;  ///< lambda_j / |lambda_j|
    };

    explicit LcuSampler(PauliSum source);

    [[nodiscard]] const PauliSum& source() const noexcept { return source_; }
    [[nodiscard]] double one_norm() const noexcept { return one_norm_; }
    [[nodiscard]] double probability(std::size_t j) const;

    Draw sample(std::mt19937_64& rng) const;

  private:
    PauliSum source_;
    double one_norm_ = 0.0;
    std::vector<double> cumulative_;
};

inline LcuSampler build_sampler(PauliSum p) { return LcuSampler(std::move(p)); }

/// Neumaier-compensated sum.
[[nodiscard]] double compensated_sum(const std::vector<double>& values);

}  // namespace vla
