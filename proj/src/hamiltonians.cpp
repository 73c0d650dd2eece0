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

#include "cosafe/hamiltonians.hpp"

namespace cosafe {

HamiltonianResult hamiltonian_max(const StateVec& drift, const Mat& jacobian,
                                  const ControlSet& controls, const Vec& p) {
  const Vec c = jacobian.transpose() * p;
  HamiltonianResult out;
  out.argopt = controls.argmin_linear(-c);
  out.value = p.dot(drift) + c.dot(out.argopt);
  return out;
}

HamiltonianResult hamiltonian_min_constrained(const StateVec& drift, const Mat& jacobian,
                                              const Vec& p, double r_val,
                                              const SafeControlSet& constraint) {
  const Vec c = jacobian.transpose() * p;
  HamiltonianResult out;
  out.argopt = min_linear_over_safe_set(constraint, c);
  out.flagged = constraint.kind == SafeControlSet::Kind::kFallback;
  out.value = p.dot(drift) + c.dot(out.argopt) + r_val;
  return out;
}

HamiltonianResult hamiltonian_max(const SystemModel& system, const StateVec& x, const Vec& p) {
  return hamiltonian_max(system.drift(x), system.control_jacobian(x), system.control_set, p);
}

HamiltonianResult hamiltonian_min_constrained(const SystemModel& system, const StateVec& x,
                                              const Vec& p, double r_val,
                                              const SafeControlSet& constraint) {
  return hamiltonian_min_constrained(system.drift(x), system.control_jacobian(x), p, r_val,
                                     constraint);
}

}  // namespace cosafe
