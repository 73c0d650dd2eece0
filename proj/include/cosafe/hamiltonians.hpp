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

#ifndef COSAFE_HAMILTONIANS_HPP
#define COSAFE_HAMILTONIANS_HPP

#include "cosafe/safe_controls.hpp"
#include "cosafe/system_model.hpp"

namespace cosafe {

struct HamiltonianResult {
  double value = 0.0;
  ControlVec argopt;
  bool flagged = false;  // evaluated at a fallback control
};

/// max over the control set of p^T f(x, u). Zero costate picks the zero
/// control.
HamiltonianResult hamiltonian_max(const SystemModel& system, const StateVec& x, const Vec& p);

/// min over the safe-control set of p^T f(x, u) + r_val, for running costs
/// that do not depend on u.
HamiltonianResult hamiltonian_min_constrained(const SystemModel& system, const StateVec& x,
                                              const Vec& p, double r_val,
                                              const SafeControlSet& constraint);

// Variants on precomputed f1(x) and f2(x), used inside solver sweeps.
HamiltonianResult hamiltonian_max(const StateVec& drift, const Mat& jacobian,
                                  const ControlSet& controls, const Vec& p);
HamiltonianResult hamiltonian_min_constrained(const StateVec& drift, const Mat& jacobian,
                                              const Vec& p, double r_val,
                                              const SafeControlSet& constraint);

}  // namespace cosafe

#endif  // COSAFE_HAMILTONIANS_HPP
