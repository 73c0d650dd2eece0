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

#include "cosafe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cosafe/hj_solver.hpp"
#include "cosafe/parallel.hpp"

namespace cosafe {
namespace {

ValueField empty_field(const GridSpec& grid, double horizon, double dt, const char* kind) {
  if (!(dt > 0.0)) throw ConfigError("oracle: dt must be positive");
  ValueField field;
  field.grid = grid;
  field.times = time_ladder(horizon, dt);
  field.slices.assign(field.times.size(), std::vector<double>(grid.num_nodes()));
  field.meta.kind = kind;
  return field;
}

std::vector<StateVec> grid_nodes(const GridSpec& grid) {
  std::vector<StateVec> nodes(grid.num_nodes());
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = grid.node(i);
  return nodes;
}

void check_samples(const SystemModel& system, const std::vector<ControlVec>& samples) {
  if (samples.empty()) throw ConfigError("oracle: empty control sample");
  for (const ControlVec& u : samples) {
    if (u.size() != system.control_dim || !system.control_set.contains(u)) {
      throw ConfigError("oracle: control sample outside the control set");
    }
  }
}

}  // namespace

std::vector<ControlVec> control_samples(const ControlSet& set, int directions) {
  if (directions < 1) throw ConfigError("control_samples: directions must be >= 1");
  const int m = set.dim();
  std::vector<ControlVec> out;
  out.push_back(set.project(ControlVec::Zero(m)));
  if (m == 2) {
    for (int j = 0; j < directions; ++j) {
      const double angle = 2.0 * std::numbers::pi * j / directions;
      ControlVec d(2);
      d << std::cos(angle), std::sin(angle);
      if (set.kind() == ControlSet::Kind::kBall) {
        out.push_back(set.radius() * d);
      } else {
        double scale = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 2; ++i) {
          if (std::abs(d[i]) > 1e-12) {
            scale = std::min(scale, (d[i] > 0 ? set.hi()[i] : -set.lo()[i]) / std::abs(d[i]));
          }
        }
        out.push_back(set.project(scale * d));
      }
    }
  } else {
    for (int i = 0; i < m; ++i) {
      for (double s : {-1.0, 1.0}) {
        ControlVec u = ControlVec::Zero(m);
        u[i] = s * set.axis_bound()[i];
        out.push_back(set.project(u));
      }
    }
  }
  return out;
}

ValueField dp_safety(const SystemModel& system,
                     const std::function<double(const StateVec&)>& constraint,
                     const GridSpec& grid, double horizon, double dt,
                     const std::vector<ControlVec>& samples, Execution execution) {
  check_samples(system, samples);
  ValueField field = empty_field(grid, horizon, dt, "oracle-safety");
  const std::vector<StateVec> nodes = grid_nodes(grid);
  std::vector<double> l(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) l[i] = constraint(nodes[i]);
  const std::size_t m = field.times.size();
  field.slices[m - 1] = l;
  for (std::size_t k = m - 1; k-- > 0;) {
    const std::vector<double>& next = field.slices[k + 1];
    std::vector<double>& out = field.slices[k];
    for_each_index(execution, nodes.size(), [&](std::size_t i) {
      double best = -std::numeric_limits<double>::infinity();
      for (const ControlVec& u : samples) {
        const StateVec y = nodes[i] + dt * system.flow_unchecked(nodes[i], u);
        const Sample s = interpolate(grid, next, y);
        const double v = s.clamped ? std::min(constraint(y), s.value) : s.value;
        best = std::max(best, v);
      }
      out[i] = std::min(l[i], best);
    });
  }
  return field;
}

ValueField dp_state_constrained(const SystemModel& system, const ProblemSpec& spec,
                                const GridSpec& grid, double horizon, double dt,
                                const std::vector<ControlVec>& samples, Execution execution) {
  check_samples(system, samples);
  // A successor is viable when it can still keep l >= 0 until T.
  const ValueField viability = dp_safety(system, spec.constraint, grid, horizon, dt, samples, execution);
  ValueField field = empty_field(grid, horizon, dt, "oracle-state-constrained");
  const std::vector<StateVec> nodes = grid_nodes(grid);
  const std::size_t m = field.times.size();

  // Interpolation runs on a support field that is finite everywhere:
  // viable nodes carry the constrained value, the others the same recursion
  // without the viability restriction. Mixing in the penalty itself would
  // bleed into feasible states next to the boundary.
  std::vector<double> support(nodes.size()), next(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    support[i] = spec.terminal_cost(nodes[i]);
    field.slices[m - 1][i] = spec.constraint(nodes[i]) < 0.0 ? kInfeasibleCost : support[i];
  }
  for (std::size_t k = m - 1; k-- > 0;) {
    next.swap(support);
    const std::vector<double>& ahead = viability.slices[k + 1];
    std::vector<double>& out = field.slices[k];
    for_each_index(execution, nodes.size(), [&](std::size_t i) {
      const StateVec& x = nodes[i];
      double best = std::numeric_limits<double>::infinity();
      double relaxed = best;
      for (const ControlVec& u : samples) {
        const StateVec y = x + dt * system.flow_unchecked(x, u);
        const double cost = spec.running_cost(x, u) * dt + interpolate(grid, next, y).value;
        relaxed = std::min(relaxed, cost);
        if (spec.constraint(y) >= 0.0 && interpolate(grid, ahead, y).value >= 0.0) {
          best = std::min(best, cost);
        }
      }
      const bool viable = spec.constraint(x) >= 0.0 && viability.slices[k][i] >= 0.0 &&
                          best < kInfeasibleCost;
      support[i] = viable ? best : relaxed;
      out[i] = viable ? best : kInfeasibleCost;
    });
  }
  return field;
}

ValueField dp_control_constrained(const SystemModel& system, const ProblemSpec& spec,
                                  const ValueField& vs, const GridSpec& grid, double horizon,
                                  double dt, const std::vector<ControlVec>& samples,
                                  const SafeControlOptions& options, Execution execution) {
  check_samples(system, samples);
  ValueField field = empty_field(grid, horizon, dt, "oracle-control-constrained");
  const std::vector<StateVec> nodes = grid_nodes(grid);
  const std::size_t m = field.times.size();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    field.slices[m - 1][i] = spec.terminal_cost(nodes[i]);
    if (value_at(vs, nodes[i], 0.0).value < 0.0) field.meta.unreliable_nodes.push_back(i);
  }
  for (std::size_t k = m - 1; k-- > 0;) {
    const double t = field.times[k];
    const std::vector<double>& next = field.slices[k + 1];
    std::vector<double>& out = field.slices[k];
    for_each_index(execution, nodes.size(), [&](std::size_t i) {
      const StateVec& x = nodes[i];
      const SafeControlSet safe = query_safe_controls(vs, system, x, t, options);
      std::vector<ControlVec> allowed;
      if (safe.kind == SafeControlSet::Kind::kFallback) {
        allowed.push_back(safe.fallback_control);
      } else {
        for (const ControlVec& u : samples) {
          if (contains(safe, u)) allowed.push_back(u);
          allowed.push_back(project_onto_safe_set(safe, u));
        }
      }
      double best = std::numeric_limits<double>::infinity();
      for (const ControlVec& u : allowed) {
        const StateVec y = x + dt * system.flow_unchecked(x, u);
        best = std::min(best, spec.running_cost(x, u) * dt + interpolate(grid, next, y).value);
      }
      out[i] = best;
    });
  }
  return field;
}

double masked_max_difference(const ValueField& a, const ValueField& b,
                             const ValueField& mask_field, double threshold) {
  if (!(a.grid == b.grid) || !(a.grid == mask_field.grid)) {
    throw ConfigError("masked_max_difference: fields live on different grids");
  }
  const std::vector<double>& va = a.initial();
  const std::vector<double>& vb = b.initial();
  const std::vector<double>& mask = mask_field.initial();
  double worst = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    if (mask[i] < threshold) continue;
    if (va[i] >= kInfeasibleCost / 2 || vb[i] >= kInfeasibleCost / 2) continue;
    worst = std::max(worst, std::abs(va[i] - vb[i]));
  }
  return worst;
}

}  // namespace cosafe
