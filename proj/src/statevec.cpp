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

#include "vla/statevec.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace vla {

std::string to_string(GateKind kind) {
    switch (kind) {
        case GateKind::Ry: return "ry";
        case GateKind::Rz: return "rz";
        case GateKind::CNOT: return "cnot";
        case GateKind::X: return "x";
        case GateKind::Y: return "y";
        case GateKind::Z: return "z";
    }
    return "?";
}

GateKind gate_kind_from_string(const std::string& name) {
    if (name == "ry") return GateKind::Ry;
    if (name == "rz") return GateKind::Rz;
    if (name == "cnot" || name == "cx") return GateKind::CNOT;
    if (name == "x") return GateKind::X;
    if (name == "y") return GateKind::Y;
    if (name == "z") return GateKind::Z;
    throw std::invalid_argument("unknown gate kind '" + name + "'");
}

char Gate::generator() const {
    switch (kind) {
        case GateKind::Ry: return 'Y';
        case GateKind::Rz: return 'Z';
        default: throw std::logic_error("gate " + to_string(kind) + " has no rotation generator");
    }
}

StateVector::StateVector(std::size_t qubits) : qubits_(qubits) {
    if (qubits == 0 || qubits > 30) throw std::invalid_argument("qubit count must be in [1, 30]");
    amps_.assign(std::size_t{1} << qubits, Complex{});
    amps_[0] = 1.0;
}

StateVector::StateVector(std::size_t qubits, std::vector<Complex> amplitudes)
    : qubits_(qubits), amps_(std::move(amplitudes)) {
    if (qubits == 0 || qubits > 30) throw std::invalid_argument("qubit count must be in [1, 30]");
    if (amps_.size() != (std::size_t{1} << qubits)) {
        throw std::invalid_argument("amplitude count does not match 2^" + std::to_string(qubits));
    }
}

StateVector StateVector::basis(std::size_t qubits, std::size_t index) {
    StateVector s(qubits);
    if (index >= s.dimension()) throw std::out_of_range("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return std::sqrt(acc);
}

void StateVector::normalize() {
    const double nrm = norm();
    if (!(nrm > 0.0)) throw DegenerateProblem("cannot normalize a zero state");
    for (auto& a : amps_) a /= nrm;
}

void StateVector::check_qubit(std::size_t q) const {
    if (q >= qubits_) {
        throw std::out_of_range("qubit " + std::to_string(q) + " out of range for " + std::to_string(qubits_) +
                                "-qubit state");
    }
}

void StateVector::apply_letter(char letter, std::size_t target) {
    check_qubit(target);
    const std::size_t bit = bit_of(target);
    const std::size_t dim = amps_.size();
    switch (letter) {
        case 'I': return;
        case 'X':
            for (std::size_t i = 0; i < dim; ++i) {
                if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
            }
            return;
        case 'Y':
            // Y|0> = i|1>, Y|1> = -i|0>
            for (std::size_t i = 0; i < dim; ++i) {
                if (!(i & bit)) {
                    const Complex a0 = amps_[i];
                    amps_[i] = -kI * amps_[i | bit];
                    amps_[i | bit] = kI * a0;
                }
            }
            return;
        case 'Z':
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & bit) amps_[i] = -amps_[i];
            }
            return;
        default: throw std::invalid_argument(std::string("unknown Pauli letter '") + letter + "'");
    }
}

void StateVector::apply_pauli(std::string_view letters) {
    if (letters.size() != qubits_) throw std::invalid_argument("Pauli string length does not match qubit count");
    const PauliMasks m = masks_of(letters);
    if (m.flip == 0 && m.phase == 0) return;
    static const Complex kIPow[4] = {1.0, kI, -1.0, -kI};
    const Complex iy = kIPow[m.y_count % 4];
    std::vector<Complex> out(amps_.size());
    for (std::size_t col = 0; col < amps_.size(); ++col) {
        const double sign = (std::popcount(col & m.phase) & 1) ? -1.0 : 1.0;
        out[col ^ m.flip] = iy * sign * amps_[col];
    }
    amps_ = std::move(out);
}

void StateVector::apply(const Gate& gate, double angle, bool inverse) {
    check_qubit(gate.target);
    const std::size_t tbit = bit_of(gate.target);
    const std::size_t dim = amps_.size();
    switch (gate.kind) {
        case GateKind::Ry: {
            const double a = inverse ? -angle : angle;
            const double c = std::cos(0.5 * a);
            const double s = std::sin(0.5 * a);
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & tbit) continue;
                const Complex a0 = amps_[i];
                const Complex a1 = amps_[i | tbit];
                amps_[i] = c * a0 - s * a1;
                amps_[i | tbit] = s * a0 + c * a1;
            }
            return;
        }
        case GateKind::Rz: {
            const double a = inverse ? -angle : angle;
            const Complex p0 = std::polar(1.0, -0.5 * a);
            const Complex p1 = std::polar(1.0, 0.5 * a);
            for (std::size_t i = 0; i < dim; ++i) amps_[i] *= (i & tbit) ? p1 : p0;
            return;
        }
        case GateKind::CNOT: {
            if (!gate.control) throw std::invalid_argument("CNOT requires a control qubit");
            check_qubit(*gate.control);
            if (*gate.control == gate.target) throw std::invalid_argument("CNOT control equals target");
            const std::size_t cbit = bit_of(*gate.control);
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
            }
            return;
        }
        case GateKind::X: apply_letter('X', gate.target); return;
        case GateKind::Y: apply_letter('Y', gate.target); return;
        case GateKind::Z: apply_letter('Z', gate.target); return;
    }
}

DenseVector StateVector::to_eigen() const {
    DenseVector v(static_cast<Eigen::Index>(amps_.size()));
    for (std::size_t i = 0; i < amps_.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps_[i];
    return v;
}

StateVector StateVector::from_eigen(const DenseVector& v) {
    const auto dim = static_cast<std::size_t>(v.size());
    if (!std::has_single_bit(dim) || dim < 2) throw std::invalid_argument("vector length must be 2^n, n >= 1");
    std::vector<Complex> amps(v.data(), v.data() + v.size());
    return StateVector(static_cast<std::size_t>(std::countr_zero(dim)), std::move(amps));
}

Circuit::Circuit(std::size_t qubits, std::size_t parameters) : qubits_(qubits), parameters_(parameters) {}

void Circuit::add(Gate gate) {
    if (gate.target >= qubits_) throw std::out_of_range("gate target outside circuit register");
    if (gate.kind == GateKind::CNOT) {
        if (!gate.control || *gate.control >= qubits_) throw std::out_of_range("CNOT control outside register");
        if (*gate.control == gate.target) throw std::invalid_argument("CNOT control equals target");
    }
    if (gate.slot) {
        if (!gate.is_rotation()) throw std::invalid_argument("only rotations take parameters");
        if (*gate.slot >= parameters_) parameters_ = *gate.slot + 1;
    }
    gates_.push_back(gate);
}

void Circuit::pauli(char letter, std::size_t target) {
    switch (letter) {
        case 'X': add({GateKind::X, target, std::nullopt, std::nullopt, 0.0}); break;
        case 'Y': add({GateKind::Y, target, std::nullopt, std::nullopt, 0.0}); break;
        case 'Z': add({GateKind::Z, target, std::nullopt, std::nullopt, 0.0}); break;
        case 'I': break;
        default: throw std::invalid_argument(std::string("unknown Pauli letter '") + letter + "'");
    }
}

void Circuit::append_fixed(const Circuit& fixed) {
    if (fixed.parameter_count() != 0) throw std::invalid_argument("prefix circuit must be parameter-free");
    if (fixed.gates().empty()) return;
    if (fixed.qubit_count() != qubits_) throw std::invalid_argument("prefix acts on a different register size");
    for (const auto& g : fixed.gates()) add(g);
}

std::size_t Circuit::new_slots(std::size_t count) {
    const std::size_t first = parameters_;
    parameters_ += count;
    return first;
}

std::size_t Circuit::cnot_count() const {
    std::size_t n = 0;
    for (const auto& g : gates_) n += g.kind == GateKind::CNOT;
    return n;
}

double Circuit::angle_of(std::size_t k, std::span<const double> theta) const {
    const Gate& g = gates_[k];
    if (g.slot) return theta[*g.slot];
    return g.angle;
}

Circuit Circuit::bind(std::span<const double> theta) const {
    if (theta.size() != parameters_) throw std::invalid_argument("parameter vector length mismatch");
    Circuit out(qubits_, 0);
    for (std::size_t k = 0; k < gates_.size(); ++k) {
        Gate g = gates_[k];
        g.angle = angle_of(k, theta);
        g.slot.reset();
        out.add(g);
    }
    return out;
}

namespace {

void add_rotation_pair(Circuit& c, std::size_t q) {
    const std::size_t slot = c.new_slots(2);
    c.ry(q, slot);
    c.rz(q, slot + 1);
}

void add_layers(Circuit& c, std::size_t qubits, std::size_t depth) {
    for (std::size_t q = 0; q < qubits; ++q) add_rotation_pair(c, q);
    for (std::size_t block = 0; block < depth; ++block) {
        for (std::size_t q = 0; q + 1 < qubits; ++q) {
            c.cnot(q, q + 1);
            add_rotation_pair(c, q + 1);
        }
    }
    if (depth > 0) {
        for (std::size_t q = qubits - 1; q >= 1; --q) c.cnot(q - 1, q);
    }
}

}  // namespace

Circuit build_hardware_ansatz(std::size_t qubits, std::size_t depth, const Circuit& prefix, PrefixPlacement placement) {
    if (qubits == 0) throw std::invalid_argument("ansatz needs at least one qubit");
    Circuit c(qubits, 0);
    if (placement == PrefixPlacement::First) c.append_fixed(prefix);
    add_layers(c, qubits, depth);
    if (placement == PrefixPlacement::Last) c.append_fixed(prefix);
    return c;
}

Circuit build_ry_ansatz(std::size_t qubits, const Circuit& prefix) {
    Circuit c(qubits, 0);
    c.append_fixed(prefix);
    for (std::size_t q = 0; q < qubits; ++q) c.ry(q, c.new_slots(1));
    return c;
}

void apply_range(StateVector& state, const Circuit& c, std::span<const double> theta, std::size_t begin,
                 std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) state.apply(c.gates()[k], c.angle_of(k, theta));
}

void apply_inverse_range(StateVector& state, const Circuit& c, std::span<const double> theta, std::size_t begin,
                         std::size_t end) {
    for (std::size_t k = end; k > begin; --k) state.apply(c.gates()[k - 1], c.angle_of(k - 1, theta), true);
}

StateVector prepare_state(const Circuit& c, std::span<const double> theta) {
    if (theta.size() != c.parameter_count()) {
        throw std::invalid_argument("expected " + std::to_string(c.parameter_count()) + " parameters, got " +
                                    std::to_string(theta.size()));
    }
    StateVector s(c.qubit_count());
    apply_range(s, c, theta, 0, c.gates().size());
    return s;
}

void apply_gate(StateVector& s, const Gate& g, double angle) { s.apply(g, angle); }

Complex inner_product(const StateVector& a, const StateVector& b) {
    if (a.dimension() != b.dimension()) throw std::invalid_argument("inner product of states of different size");
    Complex acc = 0.0;
    const auto& x = a.amplitudes();
    const auto& y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

StateVector apply_pauli_sum(const StateVector& s, const PauliSum& p) {
    if (p.empty()) throw std::invalid_argument("cannot apply an empty Pauli sum");
    if (p.qubit_count() != s.qubit_count()) throw std::invalid_argument("Pauli sum and state differ in qubit count");
    static const Complex kIPow[4] = {1.0, kI, -1.0, -kI};
    std::vector<Complex> out(s.dimension(), Complex{});
    const auto& in = s.amplitudes();
    for (const auto& t : p.terms()) {
        const PauliMasks m = masks_of(t.letters);
        const Complex w = t.coefficient * kIPow[m.y_count % 4];
        for (std::size_t col = 0; col < in.size(); ++col) {
            const double sign = (std::popcount(col & m.phase) & 1) ? -1.0 : 1.0;
            out[col ^ m.flip] += w * sign * in[col];
        }
    }
    return StateVector(s.qubit_count(), std::move(out));
}

Complex pauli_matrix_element(const StateVector& a, std::string_view letters, const StateVector& b) {
    if (letters.size() != b.qubit_count() || a.dimension() != b.dimension()) {
        throw std::invalid_argument("Pauli matrix element dimension mismatch");
    }
    static const Complex kIPow[4] = {1.0, kI, -1.0, -kI};
    const PauliMasks m = masks_of(letters);
    const auto& x = a.amplitudes();
    const auto& y = b.amplitudes();
    Complex acc = 0.0;
    for (std::size_t col = 0; col < y.size(); ++col) {
        const double sign = (std::popcount(col & m.phase) & 1) ? -1.0 : 1.0;
        acc += std::conj(x[col ^ m.flip]) * sign * y[col];
    }
    return acc * kIPow[m.y_count % 4];
}

std::vector<DerivativeTerm> derivative_state(const Circuit& c, std::span<const double> theta, std::size_t slot) {
    if (slot >= c.parameter_count()) throw std::out_of_range("parameter slot out of range");
    if (theta.size() != c.parameter_count()) throw std::invalid_argument("parameter vector length mismatch");
    std::vector<DerivativeTerm> out;
    const auto& gates = c.gates();
    for (std::size_t k = 0; k < gates.size(); ++k) {
        if (!gates[k].slot || *gates[k].slot != slot) continue;
        StateVector s(c.qubit_count());
        apply_range(s, c, theta, 0, k + 1);
        s.apply_letter(gates[k].generator(), gates[k].target);
        apply_range(s, c, theta, k + 1, gates.size());
        out.push_back({Complex{0.0, -0.5}, k, gates[k].generator(), std::move(s)});
    }
    return out;
}

}  // namespace vla
