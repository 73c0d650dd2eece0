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

#ifndef COSAFE_BASELINES_HPP
#define COSAFE_BASELINES_HPP

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "cosafe/grid.hpp"
#include "cosafe/rollout.hpp"
#include "cosafe/safe_controls.hpp"
#include "cosafe/system_model.hpp"

namespace cosafe {

struct MppiParams {
  int horizon_steps = 100;   // H
  double step_dt = 0.02;     // seconds per planning step; also the replanning period
  int samples = 1024;        // K
  double lambda = 1.0;       // temperature
  double sigma = 0.5;        // perturbation standard deviation per control axis
  double penalty = 1e3;      // weight on max(0, -l) per step
  Execution execution = Execution::kParallel;
};

/// Sampling-based MPC with the state constraint folded into a penalty.
/// Each plan perturbs the nominal control sequence with Gaussian noise,
/// projects every perturbed control onto the control set, scores the
/// sequences by Euler rollouts, and replaces the nominal by the
/// exp(-cost / lambda)-weighted mean. The nominal is shifted by one step
/// between plans.
class MppiPlanner {
 public:
  MppiPlanner(const SystemModel& system, const ProblemSpec& spec, MppiParams params,
              std::uint64_t seed);

  /// Replans from x and returns the first control of the new nominal.
  ControlVec plan(const StateVec& x);

  /// Cost of one control sequence (H x m, row-major) from x.
  double sequence_cost(const StateVec& x, const std::vector<ControlVec>& sequence) const;

  const std::vector<ControlVec>& nominal() const { return nominal_; }
  void set_nominal(std::vector<ControlVec> nominal) { nominal_ = std::move(nominal); }
  const std::vector<double>& last_costs() const { return costs_; }
  const std::vector<std::vector<ControlVec>>& last_samples() const { return candidates_; }
  const MppiParams& params() const { return params_; }

 private:
  const SystemModel& system_;
  const ProblemSpec& spec_;
  MppiParams params_;
  std::mt19937_64 rng_;
  std::vector<ControlVec> nominal_;
  std::vector<std::vector<ControlVec>> candidates_;
  std::vector<double> costs_;
};

/// MPPI as a policy running at its planning rate: a plan made at time t is
/// held until t + step_dt. The system and spec must outlive the policy.
Policy mppi_policy(const SystemModel& system, const ProblemSpec& spec, const MppiParams& params,
                   std::uint64_t seed);

/// Least-restrictive safety filter: passes the nominal control while
/// V_s(x, t) > threshold, otherwise returns the nearest control in the
/// safe-control band (or the fallback control). vs and system must outlive
/// the policy.
Policy filtered_policy(Policy nominal, const ValueField& vs, const SystemModel& system,
                       double threshold, const SafeControlOptions& options = {},
                       PolicyStats* stats = nullptr);

struct MpcParams {
  int horizon_steps = 20;    // N
  double step_dt = 0.1;      // seconds per control interval; also the replanning period
  double penalty = 1e3;      // weight on max(0, -l)^2 per step
  int iterations = 200;      // projected-gradient budget per plan
  double fd_step = 1e-5;     // forward-difference step for the gradient
  Execution execution = Execution::kParallel;
};

/// Receding-horizon single shooting over N piecewise-constant controls,
/// solved by projected gradient descent with finite-difference gradients
/// and Armijo backtracking, warm-started from the shifted previous plan.
class MpcPlanner {
 public:
  MpcPlanner(const SystemModel& system, const ProblemSpec& spec, MpcParams params);

  ControlVec plan(const StateVec& x);
  double sequence_cost(const StateVec& x, const std::vector<ControlVec>& sequence) const;
  const std::vector<ControlVec>& plan_sequence() const { return sequence_; }

 private:
  const SystemModel& system_;
  const ProblemSpec& spec_;
  MpcParams params_;
  std::vector<ControlVec> sequence_;
  double step_ = 1.0;
};

Policy mpc_policy(const SystemModel& system, const ProblemSpec& spec, const MpcParams& params);

}  // namespace cosafe

#endif  // COSAFE_BASELINES_HPP
