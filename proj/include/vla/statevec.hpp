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
 * Dense statevector simulation of parameterized circuits.
 *
 * Amplitudes are indexed by the big-endian bit string of the qubits: qubit 0
 * is the most significant bit. Rotations follow R_P(a) = exp(-i a P / 2).
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vla/pauli.hpp"
#include "vla/types.hpp"

namespace vla {

enum class GateKind { Ry, Rz, CNOT, X, Y, Z };

[[nodiscard]] std::string to_string(GateKind kind);
[[nodiscard]] GateKind gate_kind_from_string(const std::string& name);

/// One gate. Rotations read their angle from parameter `slot` when it is set,
/// otherwise from the fixed `angle`.
struct Gate {
    GateKind kind = GateKind::Ry;
    std::size_t target = 0;
    std::optional<std::size_t> control;
    std::optional<std::size_t> slot;
    double angle = 0.0;

    [[nodiscard]] bool is_rotation() const noexcept { return kind == GateKind::Ry || kind == GateKind::Rz; }
    [[nodiscard]] bool is_parameterized() const noexcept { return is_rotation() && slot.has_value(); }
    /// Pauli letter generating the rotation ('Y' for Ry, 'Z' for Rz).
    [[nodiscard]] char generator() const;
};

class StateVector {
  public:
    /// |0...0> on `qubits` qubits.
    explicit StateVector(std::size_t qubits);
    StateVector(std::size_t qubits, std::vector<Complex> amplitudes);

    static StateVector basis(std::size_t qubits, std::size_t index);

    [[nodiscard]] std::size_t qubit_count() const noexcept { return qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return amps_.size(); }
    [[nodiscard]] const std::vector<Complex>& amplitudes() const noexcept { return amps_; }
    [[nodiscard]] std::vector<Complex>& amplitudes() noexcept { return amps_; }
    [[nodiscard]] Complex operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm() const;
    void normalize();

    /// Applies a gate (or its inverse) with the given rotation angle.
    void apply(const Gate& gate, double angle, bool inverse = false);
    /// Applies the Pauli string sigma (unit coefficient).
    void apply_pauli(std::string_view letters);
    /// Applies a single-qubit Pauli letter on `target`.
    void apply_letter(char letter, std::size_t target);

    [[nodiscard]] DenseVector to_eigen() const;
    static StateVector from_eigen(const DenseVector& v);

  private:
    void check_qubit(std::size_t q) const;
    [[nodiscard]] std::size_t bit_of(std::size_t q) const noexcept { return std::size_t{1} << (qubits_ - 1 - q); }

    std::size_t qubits_;
    std::vector<Complex> amps_;
};

/**
 * Gate sequence U = G_L ... G_1 with L parameter slots.
 * A fixed prefix (state preparation) is any parameter-free leading segment.
 */
class Circuit {
  public:
    Circuit() = default;
    Circuit(std::size_t qubits, std::size_t parameters = 0);

    void add(Gate gate);
    void ry(std::size_t target, std::size_t slot) { add({GateKind::Ry, target, std::nullopt, slot, 0.0}); }
    void rz(std::size_t target, std::size_t slot) { add({GateKind::Rz, target, std::nullopt, slot, 0.0}); }
    void ry_fixed(std::size_t target, double angle) { add({GateKind::Ry, target, std::nullopt, std::nullopt, angle}); }
    void rz_fixed(std::size_t target, double angle) { add({GateKind::Rz, target, std::nullopt, std::nullopt, angle}); }
    void cnot(std::size_t control, std::size_t target) { add({GateKind::CNOT, target, control, std::nullopt, 0.0}); }
    void pauli(char letter, std::size_t target);

    /// Appends all gates of a parameter-free circuit.
    void append_fixed(const Circuit& fixed);
    /// Reserves `count` new parameter slots and returns the first.
    std::size_t new_slots(std::size_t count);

    [[nodiscard]] std::size_t qubit_count() const noexcept { return qubits_; }
    [[nodiscard]] std::size_t parameter_count() const noexcept { return parameters_; }
    [[nodiscard]] const std::vector<Gate>& gates() const noexcept { return gates_; }
    [[nodiscard]] std::size_t cnot_count() const;

    /// Rotation angle of gate k under parameters theta.
    [[nodiscard]] double angle_of(std::size_t k, std::span<const double> theta) const;

    /// Parameter-free copy with every slot replaced by its value in theta.
    [[nodiscard]] Circuit bind(std::span<const double> theta) const;

  private:
    std::size_t qubits_ = 0;
    std::size_t parameters_ = 0;
    std::vector<Gate> gates_;
};

/// Where the state-preparation prefix sits relative to the trainable layers.
enum class PrefixPlacement {
    First,  ///< prefix acts on |0...0> before the ansatz layers
    Last,   ///< ansatz layers act on |0...0>, prefix maps the result
};

/**
 * Hardware-efficient ansatz: (Ry, Rz) on every qubit, then `depth` blocks of
 * a linear CNOT chain CNOT(q, q+1) each followed by (Ry, Rz) on its target,
 * then the chain in reverse order (omitted for depth 0).
 * Parameter count is 2n + 2(n-1)depth.
 */
[[nodiscard]] Circuit build_hardware_ansatz(std::size_t qubits, std::size_t depth, const Circuit& prefix = {},
                                            PrefixPlacement placement = PrefixPlacement::First);

/// One Ry per qubit; the single-parameter circuit for one qubit.
[[nodiscard]] Circuit build_ry_ansatz(std::size_t qubits, const Circuit& prefix = {});

/// Applies gates [begin, end) of `c` to `state` in order.
void apply_range(StateVector& state, const Circuit& c, std::span<const double> theta, std::size_t begin,
                 std::size_t end);
/// Applies the inverse of gates [begin, end): G_begin^dag ... G_{end-1}^dag.
void apply_inverse_range(StateVector& state, const Circuit& c, std::span<const double> theta, std::size_t begin,
                         std::size_t end);

[[nodiscard]] StateVector prepare_state(const Circuit& c, std::span<const double> theta);

void apply_gate(StateVector& s, const Gate& g, double angle = 0.0);

[[nodiscard]] Complex inner_product(const StateVector& a, const StateVector& b);

/// sum_j lambda_j sigma_j |s>, unnormalized.
[[nodiscard]] StateVector apply_pauli_sum(const StateVector& s, const PauliSum& p);

/// <a| sigma |b> for a single Pauli string.
[[nodiscard]] Complex pauli_matrix_element(const StateVector& a, std::string_view letters, const StateVector& b);

/// |phi_i^s> = G_L ... G_{k+1} sigma G_k ... G_1 |0> with weight f = -i/2,
/// for every gate k reading parameter slot i.
struct DerivativeTerm {
    Complex weight;
    std::size_t gate_index;
    char letter;
    StateVector state;
};

[[nodiscard]] std::vector<DerivativeTerm> derivative_state(const Circuit& c, std::span<const double> theta,
                                                           std::size_t slot);

}  // namespace vla
