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

#include "cosafe/pipeline.hpp"

#include <algorithm>

#include "cosafe/baselines.hpp"
#include "cosafe/controller.hpp"
#include "cosafe/parallel.hpp"

namespace cosafe {

Benchmark make_benchmark(const RunConfig& config) {
  Benchmark b;
  b.config = config;
  b.hash = config_hash(config);
  auto [system, spec] = benchmark_instance(config.benchmark);
  b.system = std::move(system);
  b.spec = std::move(spec);
  b.grid = config.grid.spec(config.benchmark);
  b.config.solver.safe_controls.feasibility_tol = config.feasibility_tol_cells * b.grid.max_spacing();
  return b;
}

ValueField solve_benchmark_safety(const Benchmark& bench) {
  ValueField vs = solve_safety(bench.system, bench.spec.constraint, bench.grid,
                               bench.config.benchmark.horizon, bench.config.solver);
  vs.meta.config_hash = bench.hash;
  return vs;
}

ValueField solve_benchmark_performance(const Benchmark& bench, const ValueField& vs) {
  ValueField v = solve_performance(bench.system, bench.spec, vs, bench.grid, bench.config.solver);
  v.meta.config_hash = bench.hash;
  return v;
}

std::vector<StateVec> benchmark_initial_states(const Benchmark& bench, const ValueField& vs) {
  const RolloutConfig& r = bench.config.rollout;
  return sample_initial_states(vs, bench.config.benchmark.arena_lo, bench.config.benchmark.arena_hi,
                               static_cast<std::size_t>(r.num_seeds), r.seed, r.margin);
}

MethodResult run_method(const Benchmark& bench, const std::string& method, const ValueField& vs,
                        const ValueField* v, const std::vector<StateVec>& initial_states,
                        double offline_seconds, std::vector<Trajectory>* trajectories) {
  if (std::find(method_names().begin(), method_names().end(), method) == method_names().end()) {
    throw ConfigError("unknown method '" + method + "'");
  }
  if (method == "ours" && v == nullptr) throw ConfigError("method 'ours' needs the performance field");

  const RunConfig& c = bench.config;
  MethodResult result;
  result.method = method;
  result.config_hash = bench.hash;
  result.kappa = bench.kappa();
  result.offline_seconds = offline_seconds;

  // Constructing one policy up front surfaces parameter errors here rather
  // than inside the worker loop.
  const auto make_policy = [&](std::size_t i, PolicyStats* stats) -> Policy {
    const std::uint64_t stream = c.rollout.seed * 1'000'003ULL + i + 1;
    if (method == "ours") {
      return make_controller_policy(*v, vs, bench.system, bench.spec, c.solver.safe_controls,
                                    stats);
    }
    if (method == "mppi") return mppi_policy(bench.system, bench.spec, c.mppi, stream);
    if (method == "mppi-filtered") {
      return filtered_policy(mppi_policy(bench.system, bench.spec, c.mppi, stream), vs,
                             bench.system, c.filter.threshold, c.solver.safe_controls, stats);
    }
    return mpc_policy(bench.system, bench.spec, c.mpc);
  };
  (void)make_policy(0, nullptr);

  const std::size_t n = initial_states.size();
  std::vector<Trajectory> trajs(n);
  std::vector<PolicyStats> stats(n);
  // Seeds are independent; the per-call kernels inside a policy run serially
  // when this loop is parallel (no nested OpenMP regions).
  for_each_index(c.solver.execution, n, [&](std::size_t i) {
    trajs[i] = rollout(bench.system, bench.spec, instrument(make_policy(i, &stats[i]), &stats[i]),
                       initial_states[i], c.benchmark.horizon, c.rollout.dt, result.kappa);
  });

  // Receding-horizon baselines replan only every few calls, so the online
  // time is the per-call mean of each rollout, medianed over rollouts.
  std::vector<double> per_call;
  for (std::size_t i = 0; i < n; ++i) {
    const Trajectory& traj = trajs[i];
    SeedOutcome o;
    o.x0 = initial_states[i];
    o.cost = traj.running_cost_integral + bench.spec.terminal_cost(traj.states.back());
    o.min_constraint = traj.min_constraint;
    o.success = traj.success;
    result.outcomes.push_back(std::move(o));
    result.policy_calls += stats[i].calls;
    result.fallback_activations += stats[i].fallbacks;
    if (stats[i].calls > 0) {
      double total = 0.0;
      for (double sec : stats[i].call_seconds) total += sec;
      per_call.push_back(total / static_cast<double>(stats[i].calls));
    }
  }
  if (trajectories != nullptr) {
    for (Trajectory& t : trajs) trajectories->push_back(std::move(t));
  }
  result.online_seconds_median = median(per_call);
  return result;
}

}  // namespace cosafe
