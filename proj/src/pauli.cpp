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

#include "vla/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <utility>

namespace vla {

namespace {

bool valid_letter(char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; }

void require_dense_cap(std::size_t qubits) {
    if (qubits > kDenseQubitCap) {
        throw std::length_error("dense matrix requested for " + std::to_string(qubits) +
                                " qubits; cap is " + std::to_string(kDenseQubitCap));
    }
}

// Single-letter product table: a*b = phase * letter.
std::pair<Complex, char> letter_product(char a, char b) {
    if (a == 'I') return {1.0, b};
    if (b == 'I') return {1.0, a};
    if (a == b) return {1.0, 'I'};
    if (a == 'X' && b == 'Y') return {kI, 'Z'};
    if (a == 'Y' && b == 'X') return {-kI, 'Z'};
    if (a == 'Y' && b == 'Z') return {kI, 'X'};
    if (a == 'Z' && b == 'Y') return {-kI, 'X'};
    if (a == 'Z' && b == 'X') return {kI, 'Y'};
    return {-kI, 'Y'};  // X*Z
}

}  // namespace

double compensated_sum(const std::vector<double>& values) {
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    return sum + carry;
}

PauliTerm::PauliTerm(Complex coeff, std::string word) : coefficient(coeff), letters(std::move(word)) {
    if (!std::all_of(letters.begin(), letters.end(), valid_letter)) {
        throw std::invalid_argument("Pauli string may only contain I, X, Y, Z: '" + letters + "'");
    }
    if (!std::isfinite(coefficient.real()) || !std::isfinite(coefficient.imag())) {
        throw std::invalid_argument("Pauli coefficient must be finite");
    }
}

bool PauliTerm::is_identity() const noexcept {
    return std::all_of(letters.begin(), letters.end(), [](char c) { return c == 'I'; });
}

PauliMasks masks_of(std::string_view letters) {
    PauliMasks m;
    const std::size_t n = letters.size();
    for (std::size_t q = 0; q < n; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
        switch (letters[q]) {
            case 'X': m.flip |= bit; break;
            case 'Y':
                m.flip |= bit;
                m.phase |= bit;
                ++m.y_count;
                break;
            case 'Z': m.phase |= bit; break;
            default: break;
        }
    }
    return m;
}

std::pair<Complex, std::string> multiply_letters(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) throw std::invalid_argument("Pauli strings differ in length");
    Complex phase = 1.0;
    std::string out(a.size(), 'I');
    for (std::size_t q = 0; q < a.size(); ++q) {
        const auto [p, c] = letter_product(a[q], b[q]);
        phase *= p;
        out[q] = c;
    }
    return {phase, out};
}

PauliSum::PauliSum(std::size_t qubits) : qubits_(qubits) {}

PauliSum::PauliSum(std::size_t qubits, std::vector<PauliTerm> terms) : qubits_(qubits) {
    terms_.reserve(terms.size());
    for (auto& t : terms) add(std::move(t));
}

PauliSum PauliSum::identity(std::size_t qubits, Complex scale) {
    PauliSum s(qubits);
    s.add(scale, std::string(qubits, 'I'));
    return s;
}

void PauliSum::add(PauliTerm term) {
    if (term.qubit_count() != qubits_) {
        throw std::invalid_argument("Pauli term '" + term.letters + "' does not act on " +
                                    std::to_string(qubits_) + " qubits");
    }
    terms_.push_back(std::move(term));
}

double PauliSum::one_norm() const {
    std::vector<double> mags;
    mags.reserve(terms_.size());
    for (const auto& t : terms_) mags.push_back(std::abs(t.coefficient));
    return compensated_sum(mags);
}

bool PauliSum::is_hermitian(double tol) const {
    const PauliSum c = canonicalize(*this);
    return std::all_of(c.terms_.begin(), c.terms_.end(),
                       [tol](const PauliTerm& t) { return std::abs(t.coefficient.imag()) <= tol; });
}

PauliSum PauliSum::adjoint() const {
    PauliSum out(qubits_);
    out.terms_.reserve(terms_.size());
    for (const auto& t : terms_) out.terms_.push_back(PauliTerm{std::conj(t.coefficient), t.letters});
    return out;
}

PauliSum PauliSum::scaled(Complex factor) const {
    PauliSum out = *this;
    for (auto& t : out.terms_) t.coefficient *= factor;
    return out;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
    if (other.qubits_ != qubits_) throw std::invalid_argument("PauliSum qubit counts differ");
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
    if (a.qubits_ != b.qubits_) throw std::invalid_argument("PauliSum qubit counts differ");
    std::map<std::string, Complex> acc;
    for (const auto& ta : a.terms_) {
        for (const auto& tb : b.terms_) {
            auto [phase, word] = multiply_letters(ta.letters, tb.letters);
            acc[word] += phase * ta.coefficient * tb.coefficient;
        }
    }
    PauliSum out(a.qubits_);
    for (auto& [word, c] : acc) {
        if (std::abs(c) >= kPruneThreshold) out.terms_.push_back(PauliTerm{c, word});
    }
    return out;
}

PauliSum canonicalize(const PauliSum& sum) {
    std::map<std::string, Complex> acc;
    for (const auto& t : sum.terms()) acc[t.letters] += t.coefficient;
    PauliSum out(sum.qubit_count());
    for (auto& [word, c] : acc) {
        if (std::abs(c) >= kPruneThreshold) out.add(c, word);
    }
    return out;
}

DenseMatrix pauli_to_matrix(const PauliSum& sum) {
    const std::size_t n = sum.qubit_count();
    require_dense_cap(n);
    const std::size_t dim = std::size_t{1} << n;
    DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& t : sum.terms()) {
        const PauliMasks pm = masks_of(t.letters);
        Complex iy = 1.0;
        for (int k = 0; k < pm.y_count % 4; ++k) iy *= kI;
        // sigma |col> = i^y (-1)^{popcount(col & phase)} |col ^ flip>
        for (std::size_t col = 0; col < dim; ++col) {
            const std::size_t row = col ^ pm.flip;
            const double sign = (std::popcount(col & pm.phase) & 1) ? -1.0 : 1.0;
            m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += t.coefficient * iy * sign;
        }
    }
    return m;
}

PauliSum decompose_dense(const DenseMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("matrix must be square");
    const auto dim = static_cast<std::size_t>(m.rows());
    if (!std::has_single_bit(dim)) throw std::invalid_argument("matrix dimension must be a power of two");
    const auto n = static_cast<std::size_t>(std::countr_zero(dim));
    require_dense_cap(n);
    PauliSum out(n);
    const std::size_t count = std::size_t{1} << (2 * n);
    static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
    std::string word(n, 'I');
    for (std::size_t code = 0; code < count; ++code) {
        for (std::size_t q = 0; q < n; ++q) word[q] = kLetters[(code >> (2 * (n - 1 - q))) & 3U];
        const PauliMasks pm = masks_of(word);
        Complex iy = 1.0;
        for (int k = 0; k < pm.y_count % 4; ++k) iy *= kI;
        // Tr(sigma^dagger M) / 2^n, with sigma_{row,col} = i^y (-1)^{...} at row = col ^ flip.
        Complex tr = 0.0;
        for (std::size_t col = 0; col < dim; ++col) {
            const std::size_t row = col ^ pm.flip;
            const double sign = (std::popcount(col & pm.phase) & 1) ? -1.0 : 1.0;
            tr += std::conj(iy * sign) * m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
        }
        tr /= static_cast<double>(dim);
        if (std::abs(tr) >= kPruneThreshold) out.add(tr, word);
    }
    return out;
}

SparseMatrix::SparseMatrix(std::size_t dimension, std::vector<Entry> entries)
    : dimension_(dimension), entries_(std::move(entries)) {
    if (dimension_ == 0) throw std::invalid_argument("matrix dimension must be positive");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    bool any_nonzero = false;
    for (const auto& e : entries_) {
        if (e.row >= dimension_ || e.col >= dimension_) {
            throw std::out_of_range("matrix entry (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                                    ") outside dimension " + std::to_string(dimension_));
        }
        if (!seen.emplace(e.row, e.col).second) {
            throw std::invalid_argument("duplicate matrix entry (" + std::to_string(e.row) + "," +
                                        std::to_string(e.col) + ")");
        }
        if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag())) {
            throw std::invalid_argument("matrix entries must be finite");
        }
        any_nonzero = any_nonzero || e.value != Complex{};
    }
    if (!any_nonzero) throw std::invalid_argument("matrix has no nonzero entry");
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& m, double drop_below) {
    if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
    std::vector<Entry> entries;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const Complex v = m(r, c);
            if (std::abs(v) > drop_below && v != Complex{}) {
                entries.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), v});
            }
        }
    }
    return SparseMatrix(static_cast<std::size_t>(m.rows()), std::move(entries));
}

std::size_t SparseMatrix::qubit_count() const noexcept {
    const auto width = static_cast<std::size_t>(std::bit_width(dimension_ - 1));
    return std::max<std::size_t>(width, 1);
}

double SparseMatrix::abs_sum() const {
    std::vector<double> mags;
    mags.reserve(entries_.size());
    for (const auto& e : entries_) mags.push_back(std::abs(e.value));
    return compensated_sum(mags);
}

SparseMatrix SparseMatrix::padded_to_register() const {
    const std::size_t full = std::size_t{1} << qubit_count();
    if (full == dimension_) return *this;
    std::vector<Entry> entries = entries_;
    for (std::size_t k = dimension_; k < full; ++k) entries.push_back({k, k, 1.0});
    return SparseMatrix(full, std::move(entries));
}

DenseMatrix SparseMatrix::to_dense() const {
    const auto d = static_cast<Eigen::Index>(dimension_);
    DenseMatrix m = DenseMatrix::Zero(d, d);
    for (const auto& e : entries_) m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
    return m;
}

PauliSum decompose_elementwise(const SparseMatrix& m) {
    const std::size_t n = m.qubit_count();
    PauliSum out(n);
    const std::size_t per_entry = std::size_t{1} << n;
    std::string word(n, 'I');
    for (const auto& e : m.entries()) {
        // Each qubit contributes one of two letters; bit q of `choice` picks which.
        for (std::size_t choice = 0; choice < per_entry; ++choice) {
            Complex coeff = e.value;
            for (std::size_t q = 0; q < n; ++q) {
                const unsigned xb = (e.row >> (n - 1 - q)) & 1U;
                const unsigned yb = (e.col >> (n - 1 - q)) & 1U;
                const bool second = (choice >> (n - 1 - q)) & 1U;
                if (xb == yb) {
                    word[q] = second ? 'Z' : 'I';
                    coeff *= (second && xb == 1) ? -0.5 : 0.5;
                } else {
                    word[q] = second ? 'Y' : 'X';
                    // |0><1| = (X + iY)/2, |1><0| = (X - iY)/2
                    if (second) coeff *= (xb == 0) ? Complex{0.0, 0.5} : Complex{0.0, -0.5};
                    else coeff *= 0.5;
                }
            }
            out.add(coeff, word);
        }
    }
    return out;
}

LcuSampler::LcuSampler(PauliSum source) : source_(std::move(source)) {
    if (source_.empty()) throw std::invalid_argument("cannot sample from an empty Pauli sum");
    one_norm_ = source_.one_norm();
    if (!(one_norm_ > 0.0)) throw std::invalid_argument("cannot sample from an all-zero Pauli sum");
    cumulative_.reserve(source_.size());
    double acc = 0.0;
    for (const auto& t : source_.terms()) {
        acc += std::abs(t.coefficient) / one_norm_;
        cumulative_.push_back(acc);
    }
    // Close the distribution at the last term with nonzero weight.
    std::size_t last = source_.size() - 1;
    while (source_.terms()[last].coefficient == Complex{}) --last;
    std::fill(cumulative_.begin() + static_cast<std::ptrdiff_t>(last), cumulative_.end(), 1.0);
}

double LcuSampler::probability(std::size_t j) const {
    return std::abs(source_.terms().at(j).coefficient) / one_norm_;
}

LcuSampler::Draw LcuSampler::sample(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = u(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
    auto idx = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
    idx = std::min(idx, cumulative_.size() - 1);
    // Zero-weight terms have zero-width intervals and are never selected by upper_bound.
    const Complex c = source_.terms()[idx].coefficient;
    return {idx, c / std::abs(c)};
}

}  // namespace vla
