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

#ifndef COSAFE_ROLLOUT_HPP
#define COSAFE_ROLLOUT_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cosafe/grid.hpp"
#include "cosafe/system_model.hpp"

namespace cosafe {

/// State feedback u = policy(x, t).
using Policy = std::function<ControlVec(const StateVec&, double)>;

/// Per-rollout bookkeeping filled in by instrumented policies.
struct PolicyStats {
  std::size_t calls = 0;
  std::size_t fallbacks = 0;  // safe-control fallbacks taken
  std::vector<double> call_seconds;
};

/// Wraps a policy so every call is counted and timed into stats.
Policy instrument(Policy policy, PolicyStats* stats);

double median(std::vector<double> values);

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVec> states;
  std::vector<ControlVec> controls;  // one per step, held over [t_k, t_k+1)
  double running_cost_integral = 0.0;
  double min_constraint = 0.0;       // min over stored states of l
  bool success = false;              // min_constraint >= -kappa and not aborted
  bool aborted = false;
  std::string error;
};

/// Closed-loop simulation with classical RK4 and zero-order hold. The
/// running cost is integrated by the trapezoid rule on the same ladder. A
/// throwing policy or an inadmissible control aborts the rollout, which then
/// counts as unsuccessful. Throws ConfigError unless dt > 0 divides T.
Trajectory rollout(const SystemModel& system, const ProblemSpec& spec, const Policy& policy,
                   const StateVec& x0, double horizon, double dt, double kappa);

/// Rejection sampling, uniform over [lo, hi], keeping points with
/// V_s(x, 0) >= margin. Deterministic for a given seed. Throws ConfigError
/// when the acceptance region is empty or acceptance stays below 1% after
/// 10^6 draws.
std::vector<StateVec> sample_initial_states(const ValueField& vs, const std::vector<double>& lo,
                                            const std::vector<double>& hi, std::size_t count,
                                            std::uint64_t seed, double margin);

/// Success tolerance on the constraint: twice the grid spacing plus the
/// simulation step.
inline double success_tolerance(double grid_spacing, double sim_dt) {
  return 2.0 * (grid_spacing + sim_dt);
}

struct SeedOutcome {
  StateVec x0;
  double cost = 0.0;
  double min_constraint = 0.0;
  bool success = false;
};

/// Rollouts of one method from a common list of initial states.
struct MethodResult {
  std::string method;
  std::string config_hash;
  double kappa = 0.0;
  std::vector<SeedOutcome> outcomes;
  double offline_seconds = 0.0;
  double online_seconds_median = 0.0;  // median over rollouts of the mean call time
  std::size_t policy_calls = 0;
  std::size_t fallback_activations = 0;

  double success_rate() const;
};

nlohmann::json to_json(const MethodResult& result);
MethodResult method_result_from_json(const nlohmann::json& j);

/// Table-1 style comparison of every method against a reference method.
struct MethodComparison {
  std::string method;
  double success_rate = 0.0;
  std::size_t common_success = 0;
  /// Fraction of common-success seeds where this method costs more than the
  /// reference (ties within 1e-9 do not count). Empty for the reference or
  /// when no seed succeeds for both.
  std::optional<double> fraction_higher_cost;
  /// Mean of (cost - reference) / reference over common-success seeds.
  std::optional<double> mean_relative_excess;
  double offline_seconds = 0.0;
  double online_seconds_median = 0.0;
};

struct RolloutMetrics {
  std::string reference;
  std::string config_hash;
  double kappa = 0.0;
  std::vector<MethodComparison> methods;
};

/// Throws ConfigError when the methods were rolled out from different
/// initial states or under different configurations, or the reference is
/// missing.
RolloutMetrics compare(const std::vector<MethodResult>& results,
                       const std::string& reference = "ours");

nlohmann::json to_json(const RolloutMetrics& metrics);
std::string format_table(const RolloutMetrics& metrics);

/// CSV rows t, x1, x2, u1, u2, l, V_s, V. The final state has no control;
/// its control columns hold nan.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const ProblemSpec& spec,
                          const ValueField* vs, const ValueField* v);

/// Zero level set of a 2D slice as line segments (marching squares).
struct Segment {
  double x0, y0, x1, y1;
};
std::vector<Segment> zero_level_segments(const GridSpec& grid, const std::vector<double>& slice);

}  // namespace cosafe

#endif  // COSAFE_ROLLOUT_HPP
