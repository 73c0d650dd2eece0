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

#include "cosafe/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cosafe/parallel.hpp"

namespace cosafe {
namespace {

void check_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string(name) + " must be positive");
  }
}

// Replanning clock shared by the receding-horizon policies: a new plan is
// due once t reaches the next multiple of the period.
struct HoldClock {
  double period;
  double next = -std::numeric_limits<double>::infinity();
  bool due(double t) {
    if (t + 1e-9 * period < next - period) next = -std::numeric_limits<double>::infinity();
    if (t + 1e-9 * period >= next) {
      next = (std::floor(t / period + 1e-9) + 1.0) * period;
      return true;
    }
    return false;
  }
};

}  // namespace

MppiPlanner::MppiPlanner(const SystemModel& system, const ProblemSpec& spec, MppiParams params,
                         std::uint64_t seed)
    : system_(system), spec_(spec), params_(params), rng_(seed) {
  if (params_.horizon_steps < 1) throw ConfigError("mppi horizon_steps must be >= 1");
  if (params_.samples < 1) throw ConfigError("mppi samples must be >= 1");
  check_positive(params_.step_dt, "mppi step_dt");
  if (params_.sigma < 0.0 || params_.lambda < 0.0 || params_.penalty < 0.0) {
    throw ConfigError("mppi sigma, lambda and penalty must be non-negative");
  }
  nominal_.assign(params_.horizon_steps, ControlVec::Zero(system_.control_dim));
  candidates_.assign(params_.samples, nominal_);
  costs_.assign(params_.samples, 0.0);
}

double MppiPlanner::sequence_cost(const StateVec& x0,
                                  const std::vector<ControlVec>& sequence) const {
  const double dt = params_.step_dt;
  StateVec x = x0;
  double cost = 0.0;
  for (const ControlVec& u : sequence) {
    cost += spec_.running_cost(x, u) * dt;
    x = x + dt * system_.flow_unchecked(x, u);
    cost += params_.penalty * std::max(0.0, -spec_.constraint(x));
  }
  return cost + spec_.terminal_cost(x);
}

ControlVec MppiPlanner::plan(const StateVec& x) {
  const int horizon = params_.horizon_steps;
  const int samples = params_.samples;
  const int m = system_.control_dim;

  std::vector<ControlVec> base(horizon);
  for (int h = 0; h < horizon; ++h) base[h] = system_.control_set.project(nominal_[h]);

  std::normal_distribution<double> noise(0.0, params_.sigma > 0.0 ? params_.sigma : 1.0);
  for (int k = 0; k < samples; ++k) {
    for (int h = 0; h < horizon; ++h) {
      ControlVec u = base[h];
      if (params_.sigma > 0.0) {
        for (int i = 0; i < m; ++i) u[i] += noise(rng_);
        u = system_.control_set.project(u);
      }
      candidates_[k][h] = u;
    }
  }

  for_each_index(params_.execution, static_cast<std::size_t>(samples),
                 [&](std::size_t k) { costs_[k] = sequence_cost(x, candidates_[k]); });

  const auto best = std::min_element(costs_.begin(), costs_.end());
  const double s_min = *best;
  std::vector<double> weights(samples, 0.0);
  if (params_.lambda <= 0.0) {
    weights[best - costs_.begin()] = 1.0;
  } else {
    for (int k = 0; k < samples; ++k) weights[k] = std::exp(-(costs_[k] - s_min) / params_.lambda);
  }
  double total = 0.0;
  for (double w : weights) total += w;

  // Weighted mean written as an offset from the base so that identical
  // samples reproduce the base exactly.
  for (int h = 0; h < horizon; ++h) {
    ControlVec delta = ControlVec::Zero(m);
    for (int k = 0; k < samples; ++k) {
      if (weights[k] != 0.0) delta += (weights[k] / total) * (candidates_[k][h] - base[h]);
    }
    nominal_[h] = delta.isZero(0.0) ? base[h] : system_.control_set.project(base[h] + delta);
  }

  const ControlVec first = nominal_.front();
  std::rotate(nominal_.begin(), nominal_.begin() + 1, nominal_.end());
  nominal_.back() = nominal_[horizon > 1 ? horizon - 2 : 0];
  return first;
}

Policy mppi_policy(const SystemModel& system, const ProblemSpec& spec, const MppiParams& params,
                   std::uint64_t seed) {
  struct State {
    MppiPlanner planner;
    HoldClock clock;
    ControlVec held;
  };
  auto state = std::make_shared<State>(
      State{MppiPlanner(system, spec, params, seed), HoldClock{params.step_dt}, ControlVec()});
  return [state](const StateVec& x, double t) {
    if (state->clock.due(t) || state->held.size() == 0) state->held = state->planner.plan(x);
    return state->held;
  };
}

Policy filtered_policy(Policy nominal, const ValueField& vs, const SystemModel& system,
                       double threshold, const SafeControlOptions& options, PolicyStats* stats) {
  return [nominal = std::move(nominal), &vs, &system, threshold, options, stats](
             const StateVec& x, double t) {
    const ControlVec u = nominal(x, t);
    const SafeControlSet safe = query_safe_controls(vs, system, x, t, options);
    if (safe.safety_value > threshold) return u;
    if (safe.kind == SafeControlSet::Kind::kFallback) {
      if (stats != nullptr) ++stats->fallbacks;
      return safe.fallback_control;
    }
    return project_onto_safe_set(safe, u);
  };
}

MpcPlanner::MpcPlanner(const SystemModel& system, const ProblemSpec& spec, MpcParams params)
    : system_(system), spec_(spec), params_(params) {
  if (params_.horizon_steps < 1) throw ConfigError("mpc horizon_steps must be >= 1");
  if (params_.iterations < 0) throw ConfigError("mpc iterations must be >= 0");
  check_positive(params_.step_dt, "mpc step_dt");
  check_positive(params_.fd_step, "mpc fd_step");
  sequence_.assign(params_.horizon_steps, ControlVec::Zero(system_.control_dim));
}

double MpcPlanner::sequence_cost(const StateVec& x0,
                                 const std::vector<ControlVec>& sequence) const {
  const double dt = params_.step_dt;
  StateVec x = x0;
  double cost = 0.0;
  for (const ControlVec& u : sequence) {
    cost += spec_.running_cost(x, u) * dt;
    x = x + dt * system_.flow_unchecked(x, u);
    const double violation = std::max(0.0, -spec_.constraint(x));
    cost += params_.penalty * violation * violation;
  }
  return cost + spec_.terminal_cost(x);
}

ControlVec MpcPlanner::plan(const StateVec& x) {
  const int n = params_.horizon_steps;
  const int m = system_.control_dim;
  const std::size_t columns = static_cast<std::size_t>(n) * m;
  const ControlSet& set = system_.control_set;
  for (ControlVec& u : sequence_) u = set.project(u);

  double f = sequence_cost(x, sequence_);
  std::vector<double> grad(columns);
  for (int it = 0; it < params_.iterations; ++it) {
    for_each_index(params_.execution, columns, [&](std::size_t c) {
      std::vector<ControlVec> bumped = sequence_;
      bumped[c / m][c % m] += params_.fd_step;
      grad[c] = (sequence_cost(x, bumped) - f) / params_.fd_step;
    });

    // Armijo search along the projected path; the accepted step seeds the
    // next iteration's first trial.
    double step = std::min(1.0, 2.0 * step_);
    bool accepted = false;
    std::vector<ControlVec> trial(n);
    for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
      double decrease = 0.0;
      for (int k = 0; k < n; ++k) {
        ControlVec g(m);
        for (int i = 0; i < m; ++i) g[i] = grad[static_cast<std::size_t>(k) * m + i];
        trial[k] = set.project(sequence_[k] - step * g);
        decrease += g.dot(sequence_[k] - trial[k]);
      }
      const double ft = sequence_cost(x, trial);
      if (ft <= f - 1e-4 * decrease) {
        accepted = decrease > 0.0;
        sequence_ = trial;
        f = ft;
        step_ = step;
        break;
      }
    }
    if (!accepted) break;
  }

  const ControlVec first = sequence_.front();
  std::rotate(sequence_.begin(), sequence_.begin() + 1, sequence_.end());
  sequence_.back() = sequence_[n > 1 ? n - 2 : 0];
  return first;
}

Policy mpc_policy(const SystemModel& system, const ProblemSpec& spec, const MpcParams& params) {
  struct State {
    MpcPlanner planner;
    HoldClock clock;
    ControlVec held;
  };
  auto state = std::make_shared<State>(
      State{MpcPlanner(system, spec, params), HoldClock{params.step_dt}, ControlVec()});
  return [state](const StateVec& x, double t) {
    if (state->clock.due(t) || state->held.size() == 0) state->held = state->planner.plan(x);
    return state->held;
  };
}

}  // namespace cosafe
