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

#include "cosafe/config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>

namespace cosafe {
namespace {

using nlohmann::json;

const json& section(const json& root, const char* name, std::initializer_list<const char*> keys) {
  static const json kEmpty = json::object();
  if (!root.contains(name)) return kEmpty;
  const json& s = root.at(name);
  if (!s.is_object()) throw ConfigError(std::string("config: section '") + name + "' must be an object");
  std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& [key, value] : s.items()) {
    if (!known.count(key)) {
      throw ConfigError(std::string("config: unknown key '") + name + "." + key + "'");
    }
  }
  return s;
}

template <typename T>
void read(const json& s, const char* section_name, const char* key, T& out) {
  if (!s.contains(key)) return;
  try {
    out = s.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + section_name + "." + key +
                      "': " + e.what());
  }
}

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

std::vector<double> from_vec(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Execution parse_execution(bool parallel) {
  return parallel ? Execution::kParallel : Execution::kSerial;
}

}  // namespace

GridSpec GridConfig::spec(const BenchmarkConfig& bench) const {
  std::vector<int> nodes(bench.arena_lo.size(), n);
  return GridSpec::padded(bench.arena_lo, bench.arena_hi, nodes, pad_cells);
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  const std::set<std::string> sections{"benchmark", "grid",   "solver", "rollout",
                                       "mppi",      "mpc",    "filter", "oracle"};
  for (const auto& [key, value] : j.items()) {
    if (!sections.count(key)) throw ConfigError("config: unknown section '" + key + "'");
  }
  RunConfig c;

  const json& b = section(j, "benchmark",
                          {"arena_lo", "arena_hi", "obstacles", "goal", "horizon",
                           "control_radius"});
  read(b, "benchmark", "arena_lo", c.benchmark.arena_lo);
  read(b, "benchmark", "arena_hi", c.benchmark.arena_hi);
  read(b, "benchmark", "horizon", c.benchmark.horizon);
  read(b, "benchmark", "control_radius", c.benchmark.control_radius);
  if (b.contains("goal")) {
    std::vector<double> goal;
    read(b, "benchmark", "goal", goal);
    c.benchmark.goal = to_vec(goal);
  }
  if (b.contains("obstacles")) {
    if (!b.at("obstacles").is_array()) throw ConfigError("config: benchmark.obstacles must be an array");
    c.benchmark.obstacles.clear();
    for (const json& o : b.at("obstacles")) {
      const json wrapper{{"obstacle", o}};
      const json& s = section(wrapper, "obstacle", {"center", "radius"});
      std::vector<double> center;
      Obstacle ob;
      read(s, "obstacle", "center", center);
      read(s, "obstacle", "radius", ob.radius);
      ob.center = to_vec(center);
      c.benchmark.obstacles.push_back(ob);
    }
  }

  const json& g = section(j, "grid", {"n", "pad_cells"});
  read(g, "grid", "n", c.grid.n);
  read(g, "grid", "pad_cells", c.grid.pad_cells);
  if (c.grid.n < 2) throw ConfigError("config: grid.n must be >= 2");
  if (c.grid.pad_cells < 0) throw ConfigError("config: grid.pad_cells must be >= 0");

  const json& s = section(j, "solver", {"cfl", "store_dt", "gamma", "band_tol",
                                        "feasibility_tol_cells", "parallel"});
  read(s, "solver", "cfl", c.solver.cfl);
  read(s, "solver", "store_dt", c.solver.store_dt);
  read(s, "solver", "gamma", c.solver.safe_controls.gamma);
  read(s, "solver", "band_tol", c.solver.safe_controls.band_tol);
  read(s, "solver", "feasibility_tol_cells", c.feasibility_tol_cells);
  if (!(c.feasibility_tol_cells >= 0.0)) throw ConfigError("config: solver.feasibility_tol_cells must be >= 0");
  bool parallel = true;
  read(s, "solver", "parallel", parallel);
  c.solver.execution = parse_execution(parallel);
  c.solver.validate();

  const json& r = section(j, "rollout", {"dt", "num_seeds", "seed", "margin"});
  read(r, "rollout", "dt", c.rollout.dt);
  read(r, "rollout", "num_seeds", c.rollout.num_seeds);
  read(r, "rollout", "seed", c.rollout.seed);
  read(r, "rollout", "margin", c.rollout.margin);
  if (!(c.rollout.dt > 0.0)) throw ConfigError("config: rollout.dt must be positive");
  if (c.rollout.num_seeds < 1) throw ConfigError("config: rollout.num_seeds must be >= 1");

  const json& mp = section(j, "mppi", {"horizon_steps", "step_dt", "samples", "lambda", "sigma",
                                       "penalty", "parallel"});
  read(mp, "mppi", "horizon_steps", c.mppi.horizon_steps);
  read(mp, "mppi", "step_dt", c.mppi.step_dt);
  read(mp, "mppi", "samples", c.mppi.samples);
  read(mp, "mppi", "lambda", c.mppi.lambda);
  read(mp, "mppi", "sigma", c.mppi.sigma);
  read(mp, "mppi", "penalty", c.mppi.penalty);
  parallel = true;
  read(mp, "mppi", "parallel", parallel);
  c.mppi.execution = parse_execution(parallel);

  const json& mc = section(j, "mpc", {"horizon_steps", "step_dt", "penalty", "iterations",
                                      "fd_step", "parallel"});
  read(mc, "mpc", "horizon_steps", c.mpc.horizon_steps);
  read(mc, "mpc", "step_dt", c.mpc.step_dt);
  read(mc, "mpc", "penalty", c.mpc.penalty);
  read(mc, "mpc", "iterations", c.mpc.iterations);
  read(mc, "mpc", "fd_step", c.mpc.fd_step);
  parallel = true;
  read(mc, "mpc", "parallel", parallel);
  c.mpc.execution = parse_execution(parallel);

  const json& f = section(j, "filter", {"threshold"});
  read(f, "filter", "threshold", c.filter.threshold);

  const json& o = section(j, "oracle", {"n", "dt", "control_directions"});
  read(o, "oracle", "n", c.oracle.n);
  read(o, "oracle", "dt", c.oracle.dt);
  read(o, "oracle", "control_directions", c.oracle.control_directions);
  if (c.oracle.n < 2 || !(c.oracle.dt > 0.0) || c.oracle.control_directions < 1) {
    throw ConfigError("config: oracle.n >= 2, oracle.dt > 0 and oracle.control_directions >= 1");
  }

  // Geometry errors surface here rather than in the middle of a run.
  (void)benchmark_instance(c.benchmark);
  (void)time_ladder(c.benchmark.horizon, c.solver.store_dt);
  (void)time_ladder(c.benchmark.horizon, c.rollout.dt);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

json to_json(const RunConfig& c) {
  json obstacles = json::array();
  for (const Obstacle& o : c.benchmark.obstacles) {
    obstacles.push_back({{"center", from_vec(o.center)}, {"radius", o.radius}});
  }
  return {
      {"benchmark",
       {{"arena_lo", c.benchmark.arena_lo},
        {"arena_hi", c.benchmark.arena_hi},
        {"obstacles", obstacles},
        {"goal", from_vec(c.benchmark.goal)},
        {"horizon", c.benchmark.horizon},
        {"control_radius", c.benchmark.control_radius}}},
      {"grid", {{"n", c.grid.n}, {"pad_cells", c.grid.pad_cells}}},
      {"solver",
       {{"cfl", c.solver.cfl},
        {"store_dt", c.solver.store_dt},
        {"gamma", c.solver.safe_controls.gamma},
        {"band_tol", c.solver.safe_controls.band_tol},
        {"feasibility_tol_cells", c.feasibility_tol_cells},
        {"parallel", c.solver.execution == Execution::kParallel}}},
      {"rollout",
       {{"dt", c.rollout.dt},
        {"num_seeds", c.rollout.num_seeds},
        {"seed", c.rollout.seed},
        {"margin", c.rollout.margin}}},
      {"mppi",
       {{"horizon_steps", c.mppi.horizon_steps},
        {"step_dt", c.mppi.step_dt},
        {"samples", c.mppi.samples},
        {"lambda", c.mppi.lambda},
        {"sigma", c.mppi.sigma},
        {"penalty", c.mppi.penalty},
        {"parallel", c.mppi.execution == Execution::kParallel}}},
      {"mpc",
       {{"horizon_steps", c.mpc.horizon_steps},
        {"step_dt", c.mpc.step_dt},
        {"penalty", c.mpc.penalty},
        {"iterations", c.mpc.iterations},
        {"fd_step", c.mpc.fd_step},
        {"parallel", c.mpc.execution == Execution::kParallel}}},
      {"filter", {{"threshold", c.filter.threshold}}},
      {"oracle",
       {{"n", c.oracle.n}, {"dt", c.oracle.dt}, {"control_directions", c.oracle.control_directions}}},
  };
}

std::string config_hash(const RunConfig& config) {
  json j = to_json(config);
  // Execution mode changes neither results nor artifacts.
  for (const char* s : {"solver", "mppi", "mpc"}) j[s].erase("parallel");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cosafe
