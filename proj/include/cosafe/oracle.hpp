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

#ifndef COSAFE_ORACLE_HPP
#define COSAFE_ORACLE_HPP

#include <functional>
#include <vector>

#include "cosafe/grid.hpp"
#include "cosafe/safe_controls.hpp"
#include "cosafe/system_model.hpp"

namespace cosafe {

// Brute-force backward dynamic programming with a semi-Lagrangian Euler
// step and a finite control sample. Slow by design; meant for coarse grids.

/// Value stored for states that violate the constraint.
inline constexpr double kInfeasibleCost = 1e6;

/// The centre of the control set plus `directions` points on its boundary.
/// Two-dimensional sets get evenly spaced angles (rays are scaled onto the
/// box boundary for boxes); other dimensions get the 2*dim axis extremes.
std::vector<ControlVec> control_samples(const ControlSet& set, int directions);

/// V(x, t_k) = max over samples of min(l(x), V(x + f(x, u) dt, t_k+1)),
/// V(., T) = l. Successor states off the grid use min(l(next), clamped
/// interpolation).
ValueField dp_safety(const SystemModel& system,
                     const std::function<double(const StateVec&)>& constraint,
                     const GridSpec& grid, double horizon, double dt,
                     const std::vector<ControlVec>& samples,
                     Execution execution = Execution::kParallel);

/// State-constrained problem. Nodes that violate l, or cannot keep l >= 0
/// until T according to dp_safety on the same grid, hold kInfeasibleCost.
/// Elsewhere V = min over samples of r(x, u) dt + V(next, t_k+1) with next
/// restricted to viable successors. V(., T) = phi where l >= 0.
ValueField dp_state_constrained(const SystemModel& system, const ProblemSpec& spec,
                                const GridSpec& grid, double horizon, double dt,
                                const std::vector<ControlVec>& samples,
                                Execution execution = Execution::kParallel);

/// Control-constrained problem: the same recursion over the samples that
/// lie in the safe-control set of vs at (x, t_k), together with the
/// projections of every sample onto that set. A fallback classification
/// leaves only the fallback control.
ValueField dp_control_constrained(const SystemModel& system, const ProblemSpec& spec,
                                  const ValueField& vs, const GridSpec& grid, double horizon,
                                  double dt, const std::vector<ControlVec>& samples,
                                  const SafeControlOptions& options = {},
                                  Execution execution = Execution::kParallel);

/// max |a - b| over nodes of slice 0 where mask_field(x, 0) >= threshold and
/// neither value reaches kInfeasibleCost / 2. Returns 0 for an empty mask.
/// All three fields must share a grid.
double masked_max_difference(const ValueField& a, const ValueField& b,
                             const ValueField& mask_field, double threshold);

}  // namespace cosafe

#endif  // COSAFE_ORACLE_HPP
