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

#ifndef COSAFE_SYSTEM_MODEL_HPP
#define COSAFE_SYSTEM_MODEL_HPP

#include <functional>
#include <utility>
#include <vector>

#include "cosafe/control_set.hpp"
#include "cosafe/types.hpp"

namespace cosafe {

/// Control-affine dynamics x' = f1(x) + f2(x) u with a convex control set.
struct SystemModel {
  int state_dim = 0;
  int control_dim = 0;
  std::function<StateVec(const StateVec&)> drift;          // f1
  std::function<Mat(const StateVec&)> control_jacobian;   // f2, state_dim x control_dim
  ControlSet control_set;

  /// f1(x) + f2(x) u without the admissibility check.
  StateVec flow_unchecked(const StateVec& x, const ControlVec& u) const {
    return drift(x) + control_jacobian(x) * u;
  }
};

/// f1(x) + f2(x) u. Throws ContractViolation when u lies outside the control
/// set by more than 1e-9.
StateVec flow(const SystemModel& system, const StateVec& x, const ControlVec& u);

struct ProblemSpec {
  std::function<double(const StateVec&, const ControlVec&)> running_cost;  // r
  std::function<double(const StateVec&)> terminal_cost;                   // phi
  std::function<double(const StateVec&)> constraint;                      // l, safe iff >= 0
  double horizon = 0.0;                                                   // T
  /// True when r(x, u) varies with u; the analytic synthesis paths assume
  /// it does not.
  bool cost_depends_on_control = false;
};

struct Obstacle {
  Vec center;
  double radius = 0.0;
};

/// Geometry and limits of the two-dimensional benchmark. Defaults: arena
/// [-3, 2] x [-2, 2], goal (1.5, 0), horizon 2 s, unit control ball and two
/// disc obstacles of radius 0.5 at (-1.5, -0.5) and (0, 0.75).
struct BenchmarkConfig {
  std::vector<double> arena_lo{-3.0, -2.0};
  std::vector<double> arena_hi{2.0, 2.0};
  std::vector<Obstacle> obstacles = default_obstacles();
  Vec goal = Vec2(1.5, 0.0);
  double horizon = 2.0;
  double control_radius = 1.0;

  static std::vector<Obstacle> default_obstacles() {
    return {{Vec2(-1.5, -0.5), 0.5}, {Vec2(0.0, 0.75), 0.5}};
  }
  static Vec Vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
  }
};

/// Signed distance to the box interior: positive inside, exact Euclidean
/// distance (negated) outside.
double box_signed_distance(const StateVec& x, const std::vector<double>& lo,
                           const std::vector<double>& hi);

/// Benchmark dynamics x1' = u1 + 2 - x2^2 / 2, x2' = u2 over the control
/// ball, with l = min(arena signed distance, obstacle clearances),
/// r = distance to the goal and phi = 0. Throws ConfigError when an obstacle
/// covers the goal or the geometry is malformed.
std::pair<SystemModel, ProblemSpec> benchmark_instance(const BenchmarkConfig& config);

}  // namespace cosafe

#endif  // COSAFE_SYSTEM_MODEL_HPP
