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

// Python bindings. Structured results cross the boundary as JSON text and are
// decoded on the Python side, so the report schema has a single definition.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <sstream>

#include "vla/bench.hpp"
#include "vla/driver.hpp"
#include "vla/dynamics.hpp"
#include "vla/io.hpp"

namespace py = pybind11;

namespace {

vla::PauliSum from_dense(const vla::DenseMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("matrix must be square and non-empty");
    return vla::canonicalize(vla::decompose_elementwise(vla::SparseMatrix::from_dense(m).padded_to_register()));
}

vla::Circuit v0_circuit(const std::optional<std::string>& path, std::size_t qubits) {
    if (!path || *path == "zero") return vla::Circuit(qubits);
    vla::Circuit c = vla::io::load_circuit(*path);
    if (c.parameter_count() != 0 || c.qubit_count() != qubits) {
        throw std::invalid_argument("v0 circuit must be parameter-free and match the matrix size");
    }
    return c;
}

Eigen::VectorXcd to_numpy(const vla::StateVector& s) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dimension()));
    for (std::size_t i = 0; i < s.dimension(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
    return v;
}

vla::Problem problem_of(const std::string& task, const vla::DenseMatrix& m, const std::optional<std::string>& v0,
                        bool allow_non_hermitian) {
    vla::PauliSum sum = from_dense(m);
    const std::size_t n = sum.qubit_count();
    vla::ProblemMetadata meta;
    meta.allow_non_hermitian = allow_non_hermitian;
    return vla::make_problem(vla::task_from_string(task), std::move(sum), v0_circuit(v0, n), meta);
}

py::tuple run(const std::string& task, const vla::DenseMatrix& m, const std::optional<std::string>& v0,
              std::optional<std::size_t> depth, std::size_t max_depth, const std::string& optimizer,
              const std::string& mode, std::uint64_t shots, std::uint64_t seed, double fidelity_min, bool oracle,
              bool allow_non_hermitian, std::size_t max_steps, double learning_rate) {
    const vla::Problem p = problem_of(task, m, v0, allow_non_hermitian);
    vla::SolveRequest req;
    req.optimizer = optimizer;
    req.depth = depth;
    req.max_depth = max_depth;
    req.estimator.mode = vla::estimator_mode_from_string(mode);
    req.estimator.shots = shots;
    req.estimator.seed = seed;
    req.optimizer_config.seed = seed;
    req.optimizer_config.max_steps = max_steps;
    req.optimizer_config.learning_rate = learning_rate;
    req.fidelity_min = fidelity_min;
    req.oracle = oracle;
    vla::SolveReport rep;
    {
        py::gil_scoped_release release;
        rep = vla::run_solve(p, req);
    }
    return py::make_tuple(vla::dump(rep), to_numpy(vla::report_state(p, rep)));
}

py::tuple evolve(const vla::DenseMatrix& h, double time, double dt, bool imaginary, std::size_t depth,
                 std::optional<std::vector<double>> theta0, std::uint64_t seed, double relative_tolerance) {
    vla::EvolutionSpec spec;
    spec.hamiltonian = from_dense(h);
    spec.total_time = time;
    spec.dt = dt;
    spec.relative_tolerance = relative_tolerance;
    const std::size_t n = spec.hamiltonian.qubit_count();
    const vla::Circuit ansatz = vla::build_hardware_ansatz(n, depth, vla::Circuit(n), vla::PrefixPlacement::Last);
    vla::ParamVector th;
    if (theta0) {
        th = *theta0;
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-M_PI, M_PI);
        th.resize(ansatz.parameter_count());
        for (auto& t : th) t = u(rng);
    }
    if (th.size() != ansatz.parameter_count()) throw std::invalid_argument("theta0 does not fit the ansatz");
    vla::TrajectoryRecord rec;
    {
        py::gil_scoped_release release;
        rec = imaginary ? vla::imag_time_evolve(spec, ansatz, th) : vla::real_time_evolve(spec, ansatz, th);
    }
    std::vector<Eigen::VectorXcd> states;
    states.reserve(rec.thetas.size());
    for (const auto& t : rec.thetas) states.push_back(to_numpy(vla::prepare_state(ansatz, t)));
    return py::make_tuple(rec.summary_json(), states);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Variational multiplication, linear solves and dynamics on a statevector simulator";

    py::register_exception<vla::StepFailure>(m, "StepFailure", PyExc_RuntimeError);
    py::register_exception<vla::DegenerateProblem>(m, "DegenerateProblem", PyExc_ValueError);

    m.def(
        "pauli_terms",
        [](const vla::DenseMatrix& mat) {
            std::vector<std::pair<vla::Complex, std::string>> out;
            const vla::PauliSum sum = from_dense(mat);
            for (const auto& t : sum.terms()) out.emplace_back(t.coefficient, t.letters);
            return out;
        },
        py::arg("matrix"), "Pauli decomposition of a square matrix, zero-padded to a power of two.");

    m.def(
        "load_matrix", [](const std::string& path) { return vla::pauli_to_matrix(vla::io::load_matrix(path).matrix); },
        py::arg("path"), "Dense matrix from a .mtx, .json or Pauli text file.");

    m.def(
        "random_problem",
        [](std::size_t n, double kappa, std::uint64_t seed) {
            return vla::pauli_to_matrix(vla::random_problem(n, kappa, seed).matrix);
        },
        py::arg("n"), py::arg("kappa"), py::arg("seed"), "Random Hermitian positive-definite matrix with condition number kappa.");

    m.def("_run", &run, py::arg("task"), py::arg("matrix"), py::arg("v0"), py::arg("depth"), py::arg("max_depth"),
          py::arg("optimizer"), py::arg("mode"), py::arg("shots"), py::arg("seed"), py::arg("fidelity_min"),
          py::arg("oracle"), py::arg("allow_non_hermitian"), py::arg("max_steps"), py::arg("learning_rate"));

    m.def("_evolve", &evolve, py::arg("hamiltonian"), py::arg("time"), py::arg("dt"), py::arg("imaginary"),
          py::arg("depth"), py::arg("theta0"), py::arg("seed"), py::arg("relative_tolerance"));

    m.def(
        "_bench",
        [](std::vector<std::size_t> n, std::vector<double> kappa, std::vector<std::size_t> depths, std::size_t trials,
           std::uint64_t seed, std::size_t threads) {
            vla::ExperimentConfig cfg;
            cfg.qubits = std::move(n);
            cfg.kappas = std::move(kappa);
            cfg.depths = std::move(depths);
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.threads = threads;
            std::ostringstream out;
            {
                py::gil_scoped_release release;
                vla::success_experiment(cfg).write_csv(out, false);
            }
            return out.str();
        },
        py::arg("n"), py::arg("kappa"), py::arg("depths"), py::arg("trials"), py::arg("seed"), py::arg("threads"));
}
