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

#ifndef COSAFE_PIPELINE_HPP
#define COSAFE_PIPELINE_HPP

#include <string>
#include <vector>

#include "cosafe/config.hpp"
#include "cosafe/rollout.hpp"

namespace cosafe {

/// A resolved benchmark run: configuration, its hash and the model.
struct Benchmark {
  RunConfig config;
  std::string hash;
  SystemModel system;
  ProblemSpec spec;
  GridSpec grid;

  double kappa() const { return success_tolerance(grid.max_spacing(), config.rollout.dt); }
};

Benchmark make_benchmark(const RunConfig& config);

/// Solves V_s on the benchmark grid and tags it with the config hash.
ValueField solve_benchmark_safety(const Benchmark& bench);
ValueField solve_benchmark_performance(const Benchmark& bench, const ValueField& vs);

/// The rollout seed list: num_seeds states with V_s(x, 0) >= margin drawn
/// uniformly over the arena.
std::vector<StateVec> benchmark_initial_states(const Benchmark& bench, const ValueField& vs);

inline const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names{"ours", "mppi", "mppi-filtered", "mpc"};
  return names;
}

/// Rolls out one method from every initial state. v is required for
/// "ours" only. Sampling baselines draw from a stream seeded by the rollout
/// seed and the state's index. Trajectories are appended when requested.
MethodResult run_method(const Benchmark& bench, const std::string& method, const ValueField& vs,
                        const ValueField* v, const std::vector<StateVec>& initial_states,
                        double offline_seconds, std::vector<Trajectory>* trajectories = nullptr);

}  // namespace cosafe

#endif  // COSAFE_PIPELINE_HPP
