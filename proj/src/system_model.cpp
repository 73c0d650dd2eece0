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

#include "cosafe/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cosafe {

StateVec flow(const SystemModel& system, const StateVec& x, const ControlVec& u) {
  if (!system.control_set.contains(u, 1e-9)) {
    std::ostringstream msg;
    msg << "flow: control (" << u.transpose() << ") outside the control set";
    throw ContractViolation(msg.str());
  }
  return system.flow_unchecked(x, u);
}

double box_signed_distance(const StateVec& x, const std::vector<double>& lo,
                           const std::vector<double>& hi) {
  double inside = std::numeric_limits<double>::infinity();
  double outside_sq = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    inside = std::min({inside, x[i] - lo[i], hi[i] - x[i]});
    const double excess = std::max({lo[i] - x[i], x[i] - hi[i], 0.0});
    outside_sq += excess * excess;
  }
  return outside_sq > 0.0 ? -std::sqrt(outside_sq) : inside;
}

std::pair<SystemModel, ProblemSpec> benchmark_instance(const BenchmarkConfig& config) {
  if (config.arena_lo.size() != 2 || config.arena_hi.size() != 2 || config.goal.size() != 2) {
    throw ConfigError("benchmark: arena and goal must be two-dimensional");
  }
  for (int i = 0; i < 2; ++i) {
    if (!(config.arena_hi[i] > config.arena_lo[i])) {
      throw ConfigError("benchmark: arena needs hi > lo");
    }
  }
  if (!(config.horizon >= 0.0)) throw ConfigError("benchmark: horizon must be >= 0");
  for (const auto& ob : config.obstacles) {
    if (ob.center.size() != 2 || !(ob.radius > 0.0)) {
      throw ConfigError("benchmark: obstacles need a 2D centre and positive radius");
    }
    if ((config.goal - ob.center).norm() <= ob.radius) {
      throw ConfigError("benchmark: obstacle overlaps the goal");
    }
  }

  SystemModel system;
  system.state_dim = 2;
  system.control_dim = 2;
  system.drift = [](const StateVec& x) {
    StateVec f(2);
    f << 2.0 - 0.5 * x[1] * x[1], 0.0;
    return f;
  };
  system.control_jacobian = [](const StateVec&) { return Mat(Mat::Identity(2, 2)); };
  system.control_set = ControlSet::ball(2, config.control_radius);

  ProblemSpec spec;
  const Vec goal = config.goal;
  spec.running_cost = [goal](const StateVec& x, const ControlVec&) {
    return (x - goal).norm();
  };
  spec.terminal_cost = [](const StateVec&) { return 0.0; };
  spec.constraint = [lo = config.arena_lo, hi = config.arena_hi,
                     obstacles = config.obstacles](const StateVec& x) {
    double l = box_signed_distance(x, lo, hi);
    for (const auto& ob : obstacles) l = std::min(l, (x - ob.center).norm() - ob.radius);
    return l;
  };
  spec.horizon = config.horizon;
  spec.cost_depends_on_control = false;
  return {std::move(system), std::move(spec)};
}

}  // namespace cosafe
