// Copyright 2026 The cosafe Authors
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

#ifndef COSAFE_TYPES_HPP
#define COSAFE_TYPES_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace cosafe {

// Upper bound on state and control dimension. Vectors below are dynamically
// sized but stack allocated, so hot loops never touch the heap.
inline constexpr int kMaxDim = 4;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                          kMaxDim, kMaxDim>;

using StateVec = Vec;
using ControlVec = Vec;

// Thrown for malformed grids, fields and configuration files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown for queries that cannot be answered (non-finite point, time out of
// the stored range).
class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a caller breaks an operation's precondition, e.g. a control
// outside the admissible set.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Thrown by the PDE solvers when a step produces non-finite values or the
// CFL step degenerates.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Selects the serial reference loop or the OpenMP loop for data-parallel
// kernels. Both produce bitwise-identical results.
enum class Execution { kSerial, kParallel };

}  // namespace cosafe

#endif  // COSAFE_TYPES_HPP
