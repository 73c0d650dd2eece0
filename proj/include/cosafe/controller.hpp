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

#ifndef COSAFE_CONTROLLER_HPP
#define COSAFE_CONTROLLER_HPP

#include <functional>

#include "cosafe/control_set.hpp"
#include "cosafe/grid.hpp"
#include "cosafe/rollout.hpp"
#include "cosafe/safe_controls.hpp"
#include "cosafe/system_model.hpp"

namespace cosafe {

struct ControlDecision {
  enum class Active { kNone, kBand, kFallback };

  ControlVec u;
  Active active_constraint = Active::kNone;
  double objective = 0.0;  // dV/dx^T f(x, u) + r(x, u)
};

/// Minimises c^T u + cost(u) over the safe set by projected gradient descent
/// with Armijo backtracking; the cost gradient is taken by central
/// differences. Starts from the linear minimiser of c.
ControlVec minimize_over_safe_set(const SafeControlSet& set, const Vec& c,
                                  const std::function<double(const ControlVec&)>& cost,
                                  int iterations = 100, double step_tol = 1e-10);

/// Closed-loop control at (x, t): argmin over the safe set of
/// dV/dx^T f(x, u) + r(x, u). Exact for control-independent running costs;
/// otherwise uses minimize_over_safe_set.
ControlDecision synthesize(const ValueField& v, const ValueField& vs, const SystemModel& system,
                           const ProblemSpec& spec, const StateVec& x, double t,
                           const SafeControlOptions& options = {});

/// Policy wrapping synthesize. The fields and models are captured by
/// reference and must outlive the policy. Fallback activations are counted
/// into stats when it is non-null.
Policy make_controller_policy(const ValueField& v, const ValueField& vs,
                              const SystemModel& system, const ProblemSpec& spec,
                              const SafeControlOptions& options, PolicyStats* stats);

}  // namespace cosafe

#endif  // COSAFE_CONTROLLER_HPP
