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

#ifndef COSAFE_CONFIG_HPP
#define COSAFE_CONFIG_HPP

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "cosafe/baselines.hpp"
#include "cosafe/hj_solver.hpp"
#include "cosafe/system_model.hpp"

namespace cosafe {

struct GridConfig {
  int n = 70;          // nodes across the arena, per axis
  int pad_cells = 4;   // extra cells outside the arena on each side

  GridSpec spec(const BenchmarkConfig& bench) const;
};

struct RolloutConfig {
  double dt = 0.01;
  int num_seeds = 100;
  std::uint64_t seed = 1;
  double margin = 0.05;
};

struct FilterConfig {
  double threshold = 0.0;
};

struct OracleConfig {
  int n = 21;
  double dt = 0.05;
  int control_directions = 16;
};

/// Everything one benchmark run depends on. Every section and key is
/// optional in the JSON; absent keys keep their defaults, unknown keys are
/// rejected.
struct RunConfig {
  BenchmarkConfig benchmark;
  GridConfig grid;
  SolverSettings solver;
  RolloutConfig rollout;
  MppiParams mppi;
  MpcParams mpc;
  FilterConfig filter;
  OracleConfig oracle;
  /// Safe-control snapping tolerance in grid cells: the benchmark sets
  /// solver.safe_controls.feasibility_tol to this times the grid spacing.
  double feasibility_tol_cells = 1.0;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace cosafe

#endif  // COSAFE_CONFIG_HPP
