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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vla {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using ParamVector = std::vector<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Raised when a problem is mathematically ill-posed (e.g. M|v0> = 0).
class DegenerateProblem : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Raised by optimizers when energies or gradients stop being finite.
class NumericalFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace vla
