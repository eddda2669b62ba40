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

#include "vla/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace vla {

namespace {

// d/da exp(-i a P / 2) = f P exp(-i a P / 2) with f = -i/2.
constexpr Complex kRotationWeight{0.0, -0.5};

// Applies L^dag to `s` where L is the arm's circuit with its optional insertion.
void apply_arm_inverse(StateVector& s, const Arm& arm) {
    const Circuit& c = *arm.circuit;
    const std::size_t count = c.gates().size();
    if (!arm.insertion) {
        apply_inverse_range(s, c, arm.theta, 0, count);
        return;
    }
    const std::size_t k = arm.insertion->gate_index;
    apply_inverse_range(s, c, arm.theta, k + 1, count);
    s.apply_letter(arm.insertion->letter, c.gates()[k].target);
    apply_inverse_range(s, c, arm.theta, 0, k + 1);
}

// psi1 = L^dag sigma R |0>, the ancilla-|1> branch of the Hadamard test.
StateVector controlled_branch(const Arm& left, std::string_view sigma, const Arm& right) {
    StateVector s = right.state();
    s.apply_pauli(sigma);
    apply_arm_inverse(s, left);
    return s;
}

// Probability of the +1 outcome of the ancilla X measurement when the ancilla
// was prepared as (|0> + e^{i phi}|1>)/sqrt(2) and the branches are |0..0>, psi1.
double plus_probability(const StateVector& psi1, double phi) {
    // || |0..0> + e^{i phi} psi1 ||^2 / 4
    const Complex ph = std::polar(1.0, phi);
    double acc = 0.0;
    const auto& a = psi1.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Complex branch0 = (i == 0) ? Complex{1.0, 0.0} : Complex{};
        acc += std::norm(branch0 + ph * a[i]);
    }
    return std::clamp(acc / 4.0, 0.0, 1.0);
}

double ancilla_phase(Part part, double phase) {
    return part == Part::Real ? phase : phase - 0.5 * std::numbers::pi;
}

double sample_mean(double p_plus, std::uint64_t shots, std::mt19937_64& rng) {
    std::binomial_distribution<std::uint64_t> draw(shots, p_plus);
    const auto plus = static_cast<double>(draw(rng));
    return 2.0 * plus / static_cast<double>(shots) - 1.0;
}

}  // namespace

std::string to_string(EstimatorMode mode) {
    switch (mode) {
        case EstimatorMode::Exact: return "exact";
        case EstimatorMode::HadamardExact: return "hadamard";
        case EstimatorMode::HadamardShots: return "shots";
    }
    return "?";
}

EstimatorMode estimator_mode_from_string(const std::string& name) {
    if (name == "exact") return EstimatorMode::Exact;
    if (name == "hadamard" || name == "hadamard_exact") return EstimatorMode::HadamardExact;
    if (name == "shots" || name == "hadamard_shots") return EstimatorMode::HadamardShots;
    throw std::invalid_argument("unknown estimator mode '" + name + "'");
}

void EstimatorConfig::validate() const {
    if (mode == EstimatorMode::HadamardShots && shots == 0) {
        throw std::invalid_argument("shots mode requires at least one shot");
    }
}

StateVector Arm::state() const {
    const Circuit& c = *circuit;
    StateVector s(c.qubit_count());
    if (!insertion) {
        apply_range(s, c, theta, 0, c.gates().size());
        return s;
    }
    const std::size_t k = insertion->gate_index;
    apply_range(s, c, theta, 0, k + 1);
    s.apply_letter(insertion->letter, c.gates()[k].target);
    apply_range(s, c, theta, k + 1, c.gates().size());
    return s;
}

double hadamard_test(const Arm& left, std::string_view sigma, const Arm& right, Part part,
                     const EstimatorConfig& cfg, std::mt19937_64& rng, double phase) {
    cfg.validate();
    if (left.circuit == nullptr || right.circuit == nullptr) throw std::invalid_argument("arm without a circuit");
    if (left.insertion && left.insertion->gate_index >= left.circuit->gates().size()) {
        throw std::out_of_range("insertion position outside the left circuit");
    }
    if (right.insertion && right.insertion->gate_index >= right.circuit->gates().size()) {
        throw std::out_of_range("insertion position outside the right circuit");
    }
    if (cfg.mode == EstimatorMode::Exact) {
        const Complex ov = std::polar(1.0, phase) * pauli_matrix_element(left.state(), sigma, right.state());
        return part == Part::Real ? ov.real() : ov.imag();
    }
    const StateVector psi1 = controlled_branch(left, sigma, right);
    const double p = plus_probability(psi1, ancilla_phase(part, phase));
    if (cfg.mode == EstimatorMode::HadamardExact) return 2.0 * p - 1.0;
    return sample_mean(p, cfg.shots, rng);
}

SumEstimate estimate_weighted_sum(const Arm& left, const PauliSum& ops, const Arm& right, const EstimatorConfig& cfg,
                                  std::mt19937_64& rng) {
    cfg.validate();
    if (ops.empty()) throw std::invalid_argument("empty operator sum");
    SumEstimate out;
    if (cfg.mode == EstimatorMode::Exact) {
        const StateVector l = left.state();
        const StateVector r = right.state();
        for (const auto& t : ops.terms()) out.value += t.coefficient * pauli_matrix_element(l, t.letters, r);
        out.circuit_evaluations = ops.size();
        return out;
    }
    const double real_phi = ancilla_phase(Part::Real, 0.0);
    const double imag_phi = ancilla_phase(Part::Imag, 0.0);

    if (cfg.mode == EstimatorMode::HadamardShots && ops.size() > cfg.importance_threshold) {
        // Draw term j with probability |lambda_j|/C and absorb lambda_j/|lambda_j|
        // into the ancilla phase; each shot is then a +/-1 sample of
        // Re (or Im) of (lambda_j/|lambda_j|) <U_j>.
        const LcuSampler sampler(ops);
        std::unordered_map<std::size_t, Complex> overlap;
        auto amplitude = [&](std::size_t j) {
            auto it = overlap.find(j);
            if (it != overlap.end()) return it->second;
            const StateVector psi1 = controlled_branch(left, ops.terms()[j].letters, right);
            const Complex a = psi1[0];
            overlap.emplace(j, a);
            return a;
        };
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double parts[2] = {0.0, 0.0};
        double se2 = 0.0;
        for (int which = 0; which < 2; ++which) {
            double sum = 0.0;
            double sum_sq = 0.0;
            for (std::uint64_t s = 0; s < cfg.shots; ++s) {
                const auto draw = sampler.sample(rng);
                const Complex z = draw.phase * amplitude(draw.index);
                const double mean = which == 0 ? z.real() : z.imag();
                const double x = (u(rng) < 0.5 * (1.0 + mean)) ? 1.0 : -1.0;
                sum += x;
                sum_sq += x * x;
            }
            const double n = static_cast<double>(cfg.shots);
            const double m = sum / n;
            parts[which] = sampler.one_norm() * m;
            const double var = std::max(sum_sq / n - m * m, 0.0);
            se2 += sampler.one_norm() * sampler.one_norm() * var / n;
        }
        out.value = {parts[0], parts[1]};
        out.standard_error = std::sqrt(se2);
        out.circuit_evaluations = 2 * cfg.shots;
        return out;
    }

    double se2 = 0.0;
    for (const auto& t : ops.terms()) {
        const StateVector psi1 = controlled_branch(left, t.letters, right);
        const double pr = plus_probability(psi1, real_phi);
        const double pi = plus_probability(psi1, imag_phi);
        double re = 2.0 * pr - 1.0;
        double im = 2.0 * pi - 1.0;
        if (cfg.mode == EstimatorMode::HadamardShots) {
            re = sample_mean(pr, cfg.shots, rng);
            im = sample_mean(pi, cfg.shots, rng);
            const double n = static_cast<double>(cfg.shots);
            se2 += std::norm(t.coefficient) * ((1.0 - re * re) + (1.0 - im * im)) / n;
        }
        out.value += t.coefficient * Complex{re, im};
        out.circuit_evaluations += 2;
    }
    out.standard_error = std::sqrt(se2);
    return out;
}

PauliSum gram_sum(const PauliSum& m, std::size_t max_terms) {
    PauliSum g = canonicalize(m.adjoint() * m);
    if (g.size() > max_terms) {
        throw std::length_error("M^dag M has " + std::to_string(g.size()) + " Pauli terms; cap is " +
                                std::to_string(max_terms));
    }
    return g;
}

HamiltonianEstimator::HamiltonianEstimator(Problem problem, Circuit ansatz, EstimatorConfig cfg)
    : problem_(std::move(problem)), ansatz_(std::move(ansatz)), cfg_(cfg), rng_(cfg.seed), v0_(problem_.v0()) {
    cfg_.validate();
    if (ansatz_.qubit_count() != problem_.qubit_count()) {
        throw std::invalid_argument("ansatz acts on " + std::to_string(ansatz_.qubit_count()) +
                                    " qubits but the problem on " + std::to_string(problem_.qubit_count()));
    }
    if (cfg_.mode == EstimatorMode::Exact && problem_.qubit_count() <= kDenseQubitCap) {
        dense_ = pauli_to_matrix(problem_.matrix);
    }
}

void HamiltonianEstimator::check_theta(std::span<const double> theta) const {
    if (theta.size() != ansatz_.parameter_count()) {
        throw std::invalid_argument("expected " + std::to_string(ansatz_.parameter_count()) + " parameters, got " +
                                    std::to_string(theta.size()));
    }
}

Arm HamiltonianEstimator::ansatz_arm(std::span<const double> theta, std::optional<Insertion> ins) const {
    return Arm{&ansatz_, theta, ins};
}

Arm HamiltonianEstimator::prefix_arm() const { return Arm{&problem_.v0_prep, {}, std::nullopt}; }

SumEstimate HamiltonianEstimator::sum(const Arm& left, const PauliSum& ops, const Arm& right) {
    SumEstimate e = estimate_weighted_sum(left, ops, right, cfg_, rng_);
    evaluations_ += e.circuit_evaluations;
    return e;
}

namespace {

StateVector apply_matrix(const std::optional<DenseMatrix>& dense, const PauliSum& m, const StateVector& s,
                         bool adjoint = false) {
    if (dense) {
        const DenseVector v = s.to_eigen();
        return StateVector::from_eigen(adjoint ? DenseVector(dense->adjoint() * v) : DenseVector(*dense * v));
    }
    return apply_pauli_sum(s, adjoint ? m.adjoint() : m);
}

}  // namespace

SumEstimate HamiltonianEstimator::transition_amplitude(std::span<const double> theta) {
    check_theta(theta);
    if (cfg_.mode == EstimatorMode::Exact) {
        const StateVector phi = prepare_state(ansatz_, theta);
        ++evaluations_;
        return {inner_product(phi, apply_matrix(dense_, problem_.matrix, v0_)), 0.0, 1};
    }
    return sum(ansatz_arm(theta), problem_.matrix, prefix_arm());
}

std::vector<double> HamiltonianEstimator::adjoint_gradient(std::span<const double> theta, const StateVector& phi,
                                                           const StateVector& h) const {
    std::vector<double> grad(ansatz_.parameter_count(), 0.0);
    StateVector psi = phi;
    StateVector lam = h;
    const auto& gates = ansatz_.gates();
    for (std::size_t k = gates.size(); k-- > 0;) {
        const Gate& g = gates[k];
        const double angle = ansatz_.angle_of(k, theta);
        if (g.is_parameterized()) {
            StateVector tmp = psi;
            tmp.apply_letter(g.generator(), g.target);
            grad[*g.slot] += 2.0 * (std::conj(kRotationWeight) * inner_product(tmp, lam)).real();
        }
        psi.apply(g, angle, true);
        lam.apply(g, angle, true);
    }
    return grad;
}

std::vector<Complex> HamiltonianEstimator::derivative_sum(std::span<const double> theta,
                                                          const std::function<Complex(const Insertion&)>& g) const {
    std::vector<Complex> out(ansatz_.parameter_count(), Complex{});
    const auto& gates = ansatz_.gates();
    for (std::size_t k = 0; k < gates.size(); ++k) {
        if (!gates[k].is_parameterized()) continue;
        out[*gates[k].slot] += std::conj(kRotationWeight) * g(Insertion{k, gates[k].generator()});
    }
    (void)theta;
    return out;
}

Eigen::MatrixXd HamiltonianEstimator::metric(std::span<const double> theta) {
    check_theta(theta);
    const std::size_t L = ansatz_.parameter_count();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(L));
    std::vector<std::pair<std::size_t, Insertion>> slots;  // (slot, insertion)
    for (std::size_t k = 0; k < ansatz_.gates().size(); ++k) {
        const Gate& gate = ansatz_.gates()[k];
        if (gate.is_parameterized()) slots.push_back({*gate.slot, Insertion{k, gate.generator()}});
    }
    if (cfg_.mode == EstimatorMode::Exact) {
        std::vector<std::optional<StateVector>> deriv(L);
        for (const auto& [slot, ins] : slots) {
            StateVector s = ansatz_arm(theta, ins).state();
            for (auto& a : s.amplitudes()) a *= kRotationWeight;
            if (!deriv[slot]) {
                deriv[slot] = std::move(s);
            } else {
                for (std::size_t i = 0; i < s.dimension(); ++i) deriv[slot]->amplitudes()[i] += s[i];
            }
            ++evaluations_;
        }
        for (std::size_t i = 0; i < L; ++i) {
            for (std::size_t j = i; j < L; ++j) {
                if (!deriv[i] || !deriv[j]) continue;
                const double v = inner_product(*deriv[i], *deriv[j]).real();
                g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
                g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
            }
        }
        return g;
    }
    const PauliSum id = PauliSum::identity(ansatz_.qubit_count());
    for (std::size_t a = 0; a < slots.size(); ++a) {
        for (std::size_t b = a; b < slots.size(); ++b) {
            const auto& [si, ii] = slots[a];
            const auto& [sj, ij] = slots[b];
            const Complex ov = sum(ansatz_arm(theta, ii), id, ansatz_arm(theta, ij)).value;
            const double v = (std::conj(kRotationWeight) * kRotationWeight * ov).real();
            const auto ei = static_cast<Eigen::Index>(si);
            const auto ej = static_cast<Eigen::Index>(sj);
            g(ei, ej) += v;
            if (a != b) g(ej, ei) += v;
        }
    }
    return g;
}

MultiplyEstimator::MultiplyEstimator(Problem problem, Circuit ansatz, EstimatorConfig cfg)
    : HamiltonianEstimator(std::move(problem), std::move(ansatz), cfg),
      target_(apply_matrix(dense_, problem_.matrix, v0_)) {
    if (cfg_.mode == EstimatorMode::Exact) {
        normalizer_ = target_.norm() * target_.norm();
    } else {
        const PauliSum g = gram_sum(problem_.matrix);
        normalizer_ = sum(prefix_arm(), g, prefix_arm()).value.real();
    }
    if (!(normalizer_ >= 1e-24)) throw DegenerateProblem("M|v0> is numerically zero; the multiplication is undefined");
}

EnergyReport MultiplyEstimator::evaluate(std::span<const double> theta) {
    const SumEstimate a = transition_amplitude(theta);
    EnergyReport r;
    r.value = 1.0 - std::norm(a.value) / normalizer_;
    r.standard_error = 2.0 * std::abs(a.value) * a.standard_error / normalizer_;
    r.mode = cfg_.mode;
    r.shots = cfg_.mode == EstimatorMode::HadamardShots ? cfg_.shots : 0;
    r.amplitudes = {{"<phi|M|v0>", a.value}, {"||M v0||^2", normalizer_}};
    if (!std::isfinite(r.value)) throw NumericalFailure("multiplication energy is not finite");
    return r;
}

std::vector<double> MultiplyEstimator::gradient(std::span<const double> theta) {
    check_theta(theta);
    if (cfg_.mode == EstimatorMode::Exact) {
        const StateVector phi = prepare_state(ansatz_, theta);
        const Complex a = inner_product(target_, phi);  // <w|phi>
        StateVector h = phi;
        for (std::size_t i = 0; i < h.dimension(); ++i) h.amplitudes()[i] -= target_[i] * a / normalizer_;
        evaluations_ += 2;
        return adjoint_gradient(theta, phi, h);
    }
    const Complex a = transition_amplitude(theta).value;
    const std::vector<Complex> d = derivative_sum(theta, [&](const Insertion& ins) {
        return sum(ansatz_arm(theta, ins), problem_.matrix, prefix_arm()).value;
    });
    std::vector<double> grad(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) grad[i] = -2.0 * (d[i] * std::conj(a)).real() / normalizer_;
    return grad;
}

double MultiplyEstimator::exact_fidelity(std::span<const double> theta) const {
    const StateVector phi = prepare_state(ansatz_, theta);
    return std::norm(inner_product(phi, target_)) / (target_.norm() * target_.norm());
}

SolveEstimator::SolveEstimator(Problem problem, Circuit ansatz, EstimatorConfig cfg)
    : HamiltonianEstimator(std::move(problem), std::move(ansatz), cfg) {
    if (!problem_.metadata.allow_non_hermitian && !problem_.matrix.is_hermitian(1e-10)) {
        throw std::invalid_argument(
            "solve requires a Hermitian matrix; embed a general A as [[0, A], [A^dag, 0]] on one extra qubit");
    }
    if (cfg_.mode != EstimatorMode::Exact) gram_ = gram_sum(problem_.matrix);
}

EnergyReport SolveEstimator::evaluate(std::span<const double> theta) {
    check_theta(theta);
    EnergyReport r;
    r.mode = cfg_.mode;
    r.shots = cfg_.mode == EstimatorMode::HadamardShots ? cfg_.shots : 0;
    if (cfg_.mode == EstimatorMode::Exact) {
        const StateVector phi = prepare_state(ansatz_, theta);
        const StateVector u = apply_matrix(dense_, problem_.matrix, phi);
        const Complex b = inner_product(v0_, u);
        const double uu = u.norm() * u.norm();
        r.value = uu - std::norm(b);
        r.amplitudes = {{"<phi|M^dag M|phi>", uu}, {"<v0|M|phi>", b}};
        evaluations_ += 2;
    } else {
        const SumEstimate x = sum(ansatz_arm(theta), gram_, ansatz_arm(theta));
        const SumEstimate b = sum(prefix_arm(), problem_.matrix, ansatz_arm(theta));
        r.value = x.value.real() - std::norm(b.value);
        r.standard_error = std::hypot(x.standard_error, 2.0 * std::abs(b.value) * b.standard_error);
        r.amplitudes = {{"<phi|M^dag M|phi>", x.value}, {"<v0|M|phi>", b.value}};
    }
    if (!std::isfinite(r.value)) throw NumericalFailure("linear-system energy is not finite");
    return r;
}

std::vector<double> SolveEstimator::gradient(std::span<const double> theta) {
    check_theta(theta);
    if (cfg_.mode == EstimatorMode::Exact) {
        const StateVector phi = prepare_state(ansatz_, theta);
        StateVector u = apply_matrix(dense_, problem_.matrix, phi);
        const Complex b = inner_product(v0_, u);
        for (std::size_t i = 0; i < u.dimension(); ++i) u.amplitudes()[i] -= b * v0_[i];
        const StateVector h = apply_matrix(dense_, problem_.matrix, u, true);
        evaluations_ += 3;
        return adjoint_gradient(theta, phi, h);
    }
    // 2 Re <d_i phi|M^dag M|phi> - 2 Re(<d_i phi|M^dag|v0> <v0|M|phi>)
    const Complex b = sum(prefix_arm(), problem_.matrix, ansatz_arm(theta)).value;
    const PauliSum m_dag = problem_.matrix.adjoint();
    const std::vector<Complex> first = derivative_sum(
        theta, [&](const Insertion& ins) { return sum(ansatz_arm(theta, ins), gram_, ansatz_arm(theta)).value; });
    const std::vector<Complex> second = derivative_sum(
        theta, [&](const Insertion& ins) { return sum(ansatz_arm(theta, ins), m_dag, prefix_arm()).value; });
    std::vector<double> grad(first.size());
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = 2.0 * first[i].real() - 2.0 * (second[i] * b).real();
    return grad;
}

double SolveEstimator::residual_ratio(std::span<const double> theta) {
    const EnergyReport r = evaluate(theta);
    const double denom = r.amplitudes[0].second.real();
    if (!(denom >= 1e-12)) throw DegenerateProblem("<phi|M^dag M|phi> vanishes; residual ratio undefined");
    return std::norm(r.amplitudes[1].second) / denom;
}

std::unique_ptr<HamiltonianEstimator> make_estimator(const Problem& problem, const Circuit& ansatz,
                                                     const EstimatorConfig& cfg) {
    if (problem.task == Task::Multiply) return std::make_unique<MultiplyEstimator>(problem, ansatz, cfg);
    return std::make_unique<SolveEstimator>(problem, ansatz, cfg);
}

SumEstimate transition_amplitude(const Circuit& ansatz, std::span<const double> theta, const PauliSum& p,
                                 const Circuit& v0_prep, const EstimatorConfig& cfg) {
    if (p.empty()) throw std::invalid_argument("empty operator sum");
    if (ansatz.qubit_count() != p.qubit_count()) throw std::invalid_argument("ansatz and operator differ in size");
    if (theta.size() != ansatz.parameter_count()) throw std::invalid_argument("parameter vector length mismatch");
    const Circuit prep = v0_prep.qubit_count() == 0 ? Circuit(p.qubit_count()) : v0_prep;
    std::mt19937_64 rng(cfg.seed);
    return estimate_weighted_sum(Arm{&ansatz, theta, std::nullopt}, p, Arm{&prep, {}, std::nullopt}, cfg, rng);
}

EnergyReport energy_multiply(const Circuit& ansatz, std::span<const double> theta, const Problem& problem,
                             const EstimatorConfig& cfg) {
    return MultiplyEstimator(problem, ansatz, cfg).evaluate(theta);
}

EnergyReport energy_solve(const Circuit& ansatz, std::span<const double> theta, const Problem& problem,
                          const EstimatorConfig& cfg) {
    return SolveEstimator(problem, ansatz, cfg).evaluate(theta);
}

std::vector<double> grad_analytic_multiply(const Circuit& ansatz, std::span<const double> theta,
                                           const Problem& problem, const EstimatorConfig& cfg) {
    return MultiplyEstimator(problem, ansatz, cfg).gradient(theta);
}

std::vector<double> grad_analytic_solve(const Circuit& ansatz, std::span<const double> theta, const Problem& problem,
                                        const EstimatorConfig& cfg) {
    return SolveEstimator(problem, ansatz, cfg).gradient(theta);
}

std::vector<double> grad_fd(std::span<const double> theta, const std::function<double(std::span<const double>)>& energy,
                            double step) {
    if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    std::vector<double> x(theta.begin(), theta.end());
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double keep = x[i];
        x[i] = keep + step;
        const double up = energy(x);
        x[i] = keep - step;
        const double down = energy(x);
        x[i] = keep;
        grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

}  // namespace vla
