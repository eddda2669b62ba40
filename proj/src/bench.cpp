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

#include "vla/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "vla/verify.hpp"

namespace vla {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double kappa_for(const ExperimentConfig& cfg, std::size_t n, double k) {
    return cfg.kappa_per_qubit ? *cfg.kappa_per_qubit * static_cast<double>(n) : k;
}

std::vector<double> kappa_list(const ExperimentConfig& cfg) {
    if (cfg.kappa_per_qubit) return {0.0};
    return cfg.kappas;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.qubits.empty()) throw std::invalid_argument("experiment needs at least one qubit count");
    if (!cfg.kappa_per_qubit && cfg.kappas.empty()) throw std::invalid_argument("experiment needs a kappa list");
    if (cfg.depths.empty()) throw std::invalid_argument("experiment needs a depth list");
    if (cfg.trials == 0) throw std::invalid_argument("experiment needs at least one trial");
    for (std::size_t n : cfg.qubits) {
        if (n < 1 || n > 6) throw std::invalid_argument("desk-scale experiments support 1 <= n <= 6");
    }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix(mix(mix(mix(base) ^ a) ^ b) ^ c);
}

DenseMatrix haar_unitary(Eigen::Index dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    DenseMatrix z(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) z(i, j) = Complex(g(rng), g(rng));
    const Eigen::HouseholderQR<DenseMatrix> qr(z);
    DenseMatrix q = qr.householderQ();
    const DenseMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const double a = std::abs(r(j, j));
        if (a > 0.0) q.col(j) *= r(j, j) / a;
    }
    return q;
}

Problem random_problem(std::size_t n, double kappa, std::uint64_t seed, Task task) {
    if (n < 1 || n > kDenseQubitCap) throw std::invalid_argument("random problems support 1 <= n <= 12");
    if (!(kappa >= 1.0)) throw std::invalid_argument("condition number must be >= 1");
    const auto dim = Eigen::Index(1) << n;
    std::mt19937_64 rng(derive_seed(seed, 1));
    std::uniform_real_distribution<double> u(1.0, kappa);
    Eigen::VectorXd ev(dim);
    for (Eigen::Index i = 0; i < dim; ++i) ev(i) = u(rng);
    ev(0) = 1.0;
    ev(dim - 1) = kappa;
    PauliSum m(n);
    if (kappa == 1.0) {
        m = PauliSum::identity(n);
    } else {
        const DenseMatrix q = haar_unitary(dim, derive_seed(seed, 2));
        DenseMatrix a = q * ev.cast<Complex>().asDiagonal() * q.adjoint();
        a = 0.5 * (a + a.adjoint()).eval();
        m = decompose_dense(a);
        // Hermitian input: drop the rounding-level imaginary parts.
        std::vector<PauliTerm> terms;
        for (const auto& t : m.terms()) terms.emplace_back(Complex(t.coefficient.real(), 0.0), t.letters);
        m = canonicalize(PauliSum(n, std::move(terms)));
    }
    const Circuit shape = build_hardware_ansatz(n, kRandomPrepDepth);
    const ParamVector angles = random_angles(shape.parameter_count(), std::numbers::pi, derive_seed(seed, 3));
    ProblemMetadata meta;
    meta.kappa = kappa;
    meta.spectral_norm = kappa;
    meta.seed = seed;
    return make_problem(task, std::move(m), shape.bind(angles), meta);
}

double condition_number(const PauliSum& m) {
    if (!m.is_hermitian(1e-10)) throw std::invalid_argument("condition number requires a Hermitian matrix");
    const Eigen::SelfAdjointEigenSolver<DenseMatrix> es(pauli_to_matrix(m), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues().cwiseAbs();
    const double lo = ev.minCoeff();
    if (lo < 1e-12) throw DegenerateProblem("matrix is singular (smallest |eigenvalue| below 1e-12)");
    return ev.maxCoeff() / lo;
}

std::size_t thread_count() {
    if (const char* env = std::getenv("VLA_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, std::size_t threads) {
    if (threads == 0) threads = thread_count();
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::optional<std::size_t> ExperimentResult::min_depth_for(std::size_t n, double kappa) const {
    for (const auto& [key, d] : min_depth) {
        if (key.first == n && key.second == kappa) return d;
    }
    return std::nullopt;
}

void ExperimentResult::write_csv(std::ostream& out, bool include_timing) const {
    out << "n,kappa,depth,trials,successes,min_depth";
    if (include_timing) out << ",mean_seconds";
    out << '\n';
    const auto old = out.precision(17);
    for (const auto& c : cells) {
        const auto md = min_depth_for(c.n, c.kappa);
        out << c.n << ',' << c.kappa << ',' << c.depth << ',' << c.trials << ',' << c.successes << ',';
        if (md) out << *md;
        if (include_timing) out << ',' << c.mean_seconds;
        out << '\n';
    }
    out.precision(old);
}

ExperimentResult success_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    ExperimentResult out;
    std::vector<std::size_t> depths = cfg.depths;
    std::sort(depths.begin(), depths.end());
    const auto kappas = kappa_list(cfg);
    for (std::size_t ni = 0; ni < cfg.qubits.size(); ++ni) {
        const std::size_t n = cfg.qubits[ni];
        const MorphSchedule schedule = cfg.schedule.value_or(MorphSchedule::for_qubits(n));
        for (std::size_t ki = 0; ki < kappas.size(); ++ki) {
            const double kappa = kappa_for(cfg, n, kappas[ki]);
            std::vector<Problem> problems;
            for (std::size_t t = 0; t < cfg.trials; ++t) {
                problems.push_back(random_problem(n, kappa, derive_seed(cfg.seed, n, static_cast<std::uint64_t>(kappa * 1e6), t)));
            }
            std::optional<std::size_t> min_depth;
            for (std::size_t d : depths) {
                std::vector<char> ok(cfg.trials, 0);
                std::vector<double> secs(cfg.trials, 0.0);
                parallel_for(
                    cfg.trials,
                    [&](std::size_t t) {
                        const auto t0 = std::chrono::steady_clock::now();
                        const Problem& p = problems[t];
                        const Circuit ansatz = build_hardware_ansatz(n, d, p.v0_prep, cfg.placement);
                        OptimizerConfig oc = cfg.optimizer;
                        oc.seed = derive_seed(cfg.seed, 17, t, d);
                        const MorphResult r = morph_run(p, ansatz, schedule, oc, cfg.estimator, cfg.threshold);
                        ok[t] = oracle_fidelity(p, ansatz, r.theta) >= cfg.threshold;
                        secs[t] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                    },
                    cfg.threads);
                CellResult c{n, kappa, d, cfg.trials, 0, 0.0};
                for (std::size_t t = 0; t < cfg.trials; ++t) {
                    c.successes += ok[t] ? 1 : 0;
                    c.mean_seconds += secs[t] / static_cast<double>(cfg.trials);
                }
                out.cells.push_back(c);
                if (c.successes == c.trials && !min_depth) {
                    min_depth = d;
                    if (cfg.stop_at_all_success) break;
                }
            }
            out.min_depth.push_back({{n, kappa}, min_depth});
        }
    }
    return out;
}

std::optional<std::pair<double, double>> fit_power_law(const std::vector<std::pair<double, double>>& xy) {
    if (xy.size() < 2) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : xy) {
        if (!(x > 0.0 && y > 0.0)) throw std::invalid_argument("power-law fit needs positive data");
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double k = static_cast<double>(xy.size());
    const double den = k * sxx - sx * sx;
    if (std::abs(den) < 1e-300) return std::nullopt;
    const double b = (k * sxy - sx * sy) / den;
    const double a = std::exp((sy - b * sx) / k);
    return std::make_pair(a, b);
}

ExperimentResult timing_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    ExperimentResult out;
    std::vector<std::pair<double, double>> xy;
    const auto kappas = kappa_list(cfg);
    const std::size_t dmin = *std::min_element(cfg.depths.begin(), cfg.depths.end());
    const std::size_t dmax = *std::max_element(cfg.depths.begin(), cfg.depths.end());
    for (std::size_t n : cfg.qubits) {
        const double kappa = kappa_for(cfg, n, kappas.front());
        const MorphSchedule schedule = cfg.schedule.value_or(MorphSchedule::for_qubits(n));
        std::vector<double> secs(cfg.trials, 0.0);
        std::vector<std::size_t> depth(cfg.trials, 0);
        std::vector<char> ok(cfg.trials, 0);
        parallel_for(
            cfg.trials,
            [&](std::size_t t) {
                const Problem p = random_problem(n, kappa, derive_seed(cfg.seed, n, static_cast<std::uint64_t>(kappa * 1e6), t));
                OptimizerConfig oc = cfg.optimizer;
                oc.seed = derive_seed(cfg.seed, 23, t);
                const AdaptiveResult r =
                    adaptive_depth_solve(p, schedule, oc, cfg.estimator, {dmin, dmax}, cfg.threshold, cfg.placement);
                ok[t] = r.success;
                depth[t] = r.depth;
                secs[t] = r.attempts.back().seconds;
            },
            cfg.threads);
        CellResult c{n, kappa, 0, cfg.trials, 0, 0.0};
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            c.successes += ok[t] ? 1 : 0;
            c.depth = std::max(c.depth, depth[t]);
            c.mean_seconds += secs[t] / static_cast<double>(cfg.trials);
        }
        out.cells.push_back(c);
        out.timings.push_back({n, c.mean_seconds});
        xy.push_back({std::ldexp(1.0, static_cast<int>(n)), c.mean_seconds});
    }
    if (const auto fit = fit_power_law(xy)) {
        out.fitted_prefactor = fit->first;
        out.fitted_exponent = fit->second;
    }
    return out;
}

}  // namespace vla
