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

#include "cosafe/hj_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cosafe/controller.hpp"
#include "cosafe/hamiltonians.hpp"
#include "cosafe/parallel.hpp"

namespace cosafe {

namespace {

// Precomputed per-node geometry; the dynamics are time invariant.
struct NodeCache {
  std::vector<StateVec> x;
  std::vector<StateVec> drift;
  std::vector<Mat> jacobian;
};

NodeCache cache_nodes(const SystemModel& system, const GridSpec& grid) {
  if (grid.dims() != system.state_dim) {
    throw ConfigError("solver: grid dimension does not match the state dimension");
  }
  NodeCache c;
  const std::size_t n = grid.num_nodes();
  c.x.resize(n);
  c.drift.resize(n);
  c.jacobian.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.x[i] = grid.node(i);
    c.drift[i] = system.drift(c.x[i]);
    c.jacobian[i] = system.control_jacobian(c.x[i]);
  }
  return c;
}

void check_finite(std::span<const double> v, std::size_t step, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      std::ostringstream msg;
      msg << what << ": non-finite value at step " << step << ", node " << i;
      throw SolverError(msg.str());
    }
  }
}

// One TVD-RK2 (Heun) step backward from t to t - dt:
//   v1 = v + dt L(v, t);  v2 = v1 + dt L(v1, t - dt);  v <- (v + v2) / 2.
template <typename RateFn>
void heun_step(std::vector<double>& v, double t, double dt, RateFn&& rate,
               std::vector<double>& k1, std::vector<double>& stage, Execution exec) {
  rate(v, t, k1);
  for_each_index(exec, v.size(), [&](std::size_t i) { stage[i] = v[i] + dt * k1[i]; });
  rate(stage, t - dt, k1);
  for_each_index(exec, v.size(),
                 [&](std::size_t i) { v[i] = 0.5 * (v[i] + stage[i] + dt * k1[i]); });
}

}  // namespace

void SolverSettings::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("solver: cfl must lie in (0, 1]");
  if (!(store_dt > 0.0) || !std::isfinite(store_dt)) {
    throw ConfigError("solver: store_dt must be positive");
  }
  if (spatial_order != 1) throw ConfigError("solver: only first-order spatial differences");
  if (!(safe_controls.gamma >= 0.0)) throw ConfigError("solver: gamma must be >= 0");
}

std::vector<double> time_ladder(double horizon, double store_dt) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw ConfigError("solver: horizon must be finite and >= 0");
  }
  const double steps = std::round(horizon / store_dt);
  if (std::abs(steps * store_dt - horizon) > 1e-9) {
    throw ConfigError("solver: store_dt must divide the horizon");
  }
  const auto n = static_cast<std::size_t>(steps);
  std::vector<double> times(n + 1);
  for (std::size_t k = 0; k <= n; ++k) times[k] = static_cast<double>(k) * store_dt;
  times[n] = horizon;
  return times;
}

std::vector<double> dissipation_bounds(const SystemModel& system, const GridSpec& grid) {
  const int d = system.state_dim;
  std::vector<double> alpha(d, 0.0);
  const ControlSet& u = system.control_set;
  for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
    const StateVec x = grid.node(i);
    const StateVec f1 = system.drift(x);
    const Mat f2 = system.control_jacobian(x);
    for (int j = 0; j < d; ++j) {
      double reach = 0.0;
      if (u.kind() == ControlSet::Kind::kBall) {
        reach = u.radius() * f2.row(j).norm();
      } else {
        for (int k = 0; k < system.control_dim; ++k) {
          reach += std::abs(f2(j, k)) * std::max(std::abs(u.lo()[k]), std::abs(u.hi()[k]));
        }
      }
      alpha[j] = std::max(alpha[j], std::abs(f1[j]) + reach);
    }
  }
  return alpha;
}

double internal_step(const std::vector<double>& alpha, const GridSpec& grid,
                     const SolverSettings& settings, int* substeps) {
  double speed = 0.0;
  for (int i = 0; i < grid.dims(); ++i) speed += alpha[i] / grid.spacing(i);
  int n = 1;
  if (speed > 0.0) {
    const double dt_cfl = settings.cfl / speed;
    if (!(dt_cfl > 0.0) || !std::isfinite(dt_cfl)) {
      throw SolverError("solver: CFL step is not positive");
    }
    n = static_cast<int>(std::ceil(settings.store_dt / dt_cfl - 1e-12));
    n = std::max(n, 1);
  }
  if (substeps != nullptr) *substeps = n;
  const double dt = settings.store_dt / n;
  if (!(dt > 0.0)) throw SolverError("solver: internal step is not positive");
  return dt;
}

void lax_friedrichs_rate(const GridSpec& grid, std::span<const double> values,
                         const std::vector<double>& alpha, const NodeHamiltonian& hamiltonian,
                         std::span<double> rate, Execution execution) {
  const int d = grid.dims();
  for_each_index(execution, grid.num_nodes(), [&](std::size_t node) {
    Vec p(d);
    double dissipation = 0.0;
    for (int i = 0; i < d; ++i) {
      const std::size_t s = grid.stride(i);
      const int n = grid.n()[i];
      const int k = static_cast<int>((node / s) % static_cast<std::size_t>(n));
      const double h = grid.spacing(i);
      // Ghost nodes by linear extrapolation make both one-sided differences
      // equal on the boundary.
      double minus, plus;
      if (k == 0) {
        minus = plus = (values[node + s] - values[node]) / h;
      } else if (k == n - 1) {
        minus = plus = (values[node] - values[node - s]) / h;
      } else {
        minus = (values[node] - values[node - s]) / h;
        plus = (values[node + s] - values[node]) / h;
      }
      p[i] = 0.5 * (plus + minus);
      dissipation += 0.5 * alpha[i] * (plus - minus);
    }
    rate[node] = hamiltonian(node, p) + dissipation;
  });
}

ValueField solve_safety(const SystemModel& system,
                        const std::function<double(const StateVec&)>& constraint,
                        const GridSpec& grid, double horizon, const SolverSettings& settings) {
  settings.validate();
  const NodeCache nodes = cache_nodes(system, grid);
  const std::size_t n = grid.num_nodes();

  ValueField field;
  field.grid = grid;
  field.times = time_ladder(horizon, settings.store_dt);
  field.meta.kind = "safety";
  std::vector<double> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = constraint(nodes.x[i]);
  check_finite(l, 0, "solve_safety: constraint");

  const std::size_t m = field.times.size();
  field.slices.assign(m, {});
  field.slices[m - 1] = l;
  if (m == 1) return field;

  const std::vector<double> alpha = dissipation_bounds(system, grid);
  int substeps = 1;
  const double dt = internal_step(alpha, grid, settings, &substeps);

  const ControlSet& controls = system.control_set;
  const NodeHamiltonian ham = [&](std::size_t node, const Vec& p) {
    return hamiltonian_max(nodes.drift[node], nodes.jacobian[node], controls, p).value;
  };
  auto rate = [&](const std::vector<double>& v, double, std::vector<double>& out) {
    lax_friedrichs_rate(grid, v, alpha, ham, out, settings.execution);
  };

  // Each step is clamped by l and by the previous value: more time to go
  // can only lower the safety value.
  std::vector<double> v = l, previous(n), k1(n), stage(n);
  std::size_t step = 0;
  for (std::size_t k = m - 1; k-- > 0;) {
    for (int s = 0; s < substeps; ++s, ++step) {
      const double t = field.times[k + 1] - s * dt;
      previous = v;
      heun_step(v, t, dt, rate, k1, stage, settings.execution);
      for_each_index(settings.execution, n, [&](std::size_t i) {
        v[i] = std::min({v[i], l[i], previous[i]});
      });
    }
    check_finite(v, step, "solve_safety");
    field.slices[k] = v;
  }
  return field;
}

ValueField solve_performance(const SystemModel& system, const ProblemSpec& spec,
                             const ValueField& vs, const GridSpec& grid,
                             const SolverSettings& settings) {
  settings.validate();
  if (!(vs.grid == grid)) {
    throw ConfigError("solve_performance: safety field lives on a different grid");
  }
  const NodeCache nodes = cache_nodes(system, grid);
  const std::size_t n = grid.num_nodes();
  const int d = grid.dims();

  ValueField field;
  field.grid = grid;
  field.times = time_ladder(spec.horizon, settings.store_dt);
  field.meta.kind = "performance";
  if (field.times.size() != vs.times.size() ||
      std::abs(field.times.back() - vs.times.back()) > 1e-9) {
    throw ConfigError("solve_performance: safety field covers a different time ladder");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (vs.initial()[i] < 0.0) field.meta.unreliable_nodes.push_back(i);
  }

  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = spec.terminal_cost(nodes.x[i]);
  check_finite(phi, 0, "solve_performance: terminal cost");
  const std::size_t m = field.times.size();
  field.slices.assign(m, {});
  field.slices[m - 1] = phi;
  if (m == 1) return field;

  // Running cost at nodes for control-independent r.
  std::vector<double> r_node(n, 0.0);
  if (!spec.cost_depends_on_control) {
    const ControlVec zero = ControlVec::Zero(system.control_dim);
    for (std::size_t i = 0; i < n; ++i) r_node[i] = spec.running_cost(nodes.x[i], zero);
  }

  const std::vector<double> alpha = dissipation_bounds(system, grid);
  int substeps = 1;
  const double dt = internal_step(alpha, grid, settings, &substeps);

  // Safety quantities at the current stage time, refreshed per stage.
  std::size_t bracket_k = 0;
  double bracket_w = 0.0;
  double bracket_dt = 1.0;
  const NodeHamiltonian ham = [&](std::size_t node, const Vec& p) {
    const auto lo = vs.slice(bracket_k);
    const auto hi = vs.slice(bracket_k + 1);
    const double value = (1.0 - bracket_w) * lo[node] + bracket_w * hi[node];
    const double dvdt = (hi[node] - lo[node]) / bracket_dt;
    Vec grad(d);
    for (int i = 0; i < d; ++i) {
      grad[i] = (1.0 - bracket_w) * nodal_derivative(grid, lo, node, i) +
                bracket_w * nodal_derivative(grid, hi, node, i);
    }
    const SafeControlSet safe =
        classify_safe_controls(value, dvdt, grad, nodes.drift[node], nodes.jacobian[node],
                               system.control_set, settings.safe_controls);
    if (!spec.cost_depends_on_control) {
      return hamiltonian_min_constrained(nodes.drift[node], nodes.jacobian[node], p,
                                         r_node[node], safe)
          .value;
    }
    const Vec c = nodes.jacobian[node].transpose() * p;
    const ControlVec u = minimize_over_safe_set(
        safe, c, [&](const ControlVec& w) { return spec.running_cost(nodes.x[node], w); });
    return p.dot(nodes.drift[node]) + c.dot(u) + spec.running_cost(nodes.x[node], u);
  };
  auto rate = [&](const std::vector<double>& v, double t, std::vector<double>& out) {
    const auto [k, w] = vs.bracket(t);
    bracket_k = k;
    bracket_w = w;
    bracket_dt = vs.times[k + 1] - vs.times[k];
    lax_friedrichs_rate(grid, v, alpha, ham, out, settings.execution);
  };

  std::vector<double> v = phi, k1(n), stage(n);
  std::size_t step = 0;
  for (std::size_t k = m - 1; k-- > 0;) {
    for (int s = 0; s < substeps; ++s, ++step) {
      const double t = field.times[k + 1] - s * dt;
      heun_step(v, t, dt, rate, k1, stage, settings.execution);
    }
    check_finite(v, step, "solve_performance");
    field.slices[k] = v;
  }
  return field;
}

}  // namespace cosafe
