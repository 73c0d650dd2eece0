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

// cosafe: solve, roll out, compare and export the benchmark.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cosafe/config.hpp"
#include "cosafe/field_io.hpp"
#include "cosafe/oracle.hpp"
#include "cosafe/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON config (defaults when omitted)");
  cmd->add_option("--out", c.out_dir, "Artifact directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Override rollout.seed");
  cmd->add_option("--grid", c.grid, "Override grid.n");
}

cosafe::Benchmark load(const Common& c) {
  cosafe::RunConfig config =
      c.config_path.empty() ? cosafe::config_from_json(json::object()) : cosafe::load_config(c.config_path);
  if (c.seed) config.rollout.seed = *c.seed;
  if (c.grid) {
    if (*c.grid < 2) throw cosafe::ConfigError("--grid must be >= 2");
    config.grid.n = *c.grid;
  }
  fs::create_directories(c.out_dir);
  return cosafe::make_benchmark(config);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw cosafe::ConfigError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw cosafe::ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << std::setw(2) << j << '\n';
  if (!out) throw cosafe::ConfigError("cannot write '" + path.string() + "'");
}

// Solve timings live next to the fields so that rollout can report the
// offline cost of the method.
void record_timing(const fs::path& dir, const std::string& key, double seconds) {
  const fs::path path = dir / "timings.json";
  json j = fs::exists(path) ? read_json(path) : json::object();
  j[key] = seconds;
  write_json(path, j);
}

double recorded_timing(const fs::path& dir, const std::string& key) {
  const fs::path path = dir / "timings.json";
  if (!fs::exists(path)) return 0.0;
  return read_json(path).value(key, 0.0);
}

cosafe::ValueField load_checked(const fs::path& path, const cosafe::Benchmark& bench) {
  cosafe::ValueField f = cosafe::load_field(path.string());
  if (f.meta.config_hash != bench.hash) {
    throw cosafe::ConfigError("'" + path.string() + "' was produced under a different config (hash " +
                              f.meta.config_hash + ", expected " + bench.hash + ")");
  }
  return f;
}

int solve_safety_cmd(const Common& c) {
  const cosafe::Benchmark bench = load(c);
  const auto start = std::chrono::steady_clock::now();
  const cosafe::ValueField vs = cosafe::solve_benchmark_safety(bench);
  const double elapsed = seconds_since(start);
  cosafe::save_field((fs::path(c.out_dir) / "vs.bin").string(), vs);
  record_timing(c.out_dir, "safety_seconds", elapsed);
  std::cout << "safety field: " << vs.grid.num_nodes() << " nodes x " << vs.times.size()
            << " slices in " << elapsed << " s, hash " << bench.hash << '\n';
  return 0;
}

int solve_perf_cmd(const Common& c) {
  const cosafe::Benchmark bench = load(c);
  const cosafe::ValueField vs = load_checked(fs::path(c.out_dir) / "vs.bin", bench);
  const auto start = std::chrono::steady_clock::now();
  const cosafe::ValueField v = cosafe::solve_benchmark_performance(bench, vs);
  const double elapsed = seconds_since(start);
  cosafe::save_field((fs::path(c.out_dir) / "v.bin").string(), v);
  record_timing(c.out_dir, "performance_seconds", elapsed);
  std::cout << "performance field in " << elapsed << " s, " << v.meta.unreliable_nodes.size()
            << " unreliable nodes\n";
  return 0;
}

int rollout_cmd(const Common& c, const std::string& method) {
  const cosafe::Benchmark bench = load(c);
  const fs::path dir(c.out_dir);
  const cosafe::ValueField vs = load_checked(dir / "vs.bin", bench);
  std::optional<cosafe::ValueField> v;
  double offline = 0.0;
  if (method == "ours") {
    v = load_checked(dir / "v.bin", bench);
    offline = recorded_timing(dir, "safety_seconds") + recorded_timing(dir, "performance_seconds");
  } else if (method == "mppi-filtered") {
    offline = recorded_timing(dir, "safety_seconds");
  }
  const auto x0 = cosafe::benchmark_initial_states(bench, vs);
  const cosafe::MethodResult result =
      cosafe::run_method(bench, method, vs, v ? &*v : nullptr, x0, offline);
  write_json(dir / ("rollout_" + method + ".json"), cosafe::to_json(result));
  std::cout << method << ": success_rate " << result.success_rate() << " over "
            << result.outcomes.size() << " seeds, kappa " << result.kappa << ", fallbacks "
            << result.fallback_activations << '\n';
  return 0;
}

int compare_cmd(const Common& c, std::vector<std::string> inputs) {
  const fs::path dir(c.out_dir);
  fs::create_directories(dir);
  if (inputs.empty()) {
    for (const std::string& m : cosafe::method_names()) {
      const fs::path p = dir / ("rollout_" + m + ".json");
      if (fs::exists(p)) inputs.push_back(p.string());
    }
  }
  if (inputs.empty()) throw cosafe::ConfigError("compare: no rollout results found");
  std::vector<cosafe::MethodResult> results;
  for (const std::string& path : inputs) {
    results.push_back(cosafe::method_result_from_json(read_json(path)));
  }
  const std::string reference = results.front().method == "ours" ||
                                        std::none_of(results.begin(), results.end(),
                                                     [](const auto& r) { return r.method == "ours"; })
                                    ? results.front().method
                                    : std::string("ours");
  const cosafe::RolloutMetrics metrics = cosafe::compare(results, reference);
  write_json(dir / "metrics.json", cosafe::to_json(metrics));
  const std::string table = cosafe::format_table(metrics);
  std::ofstream(dir / "metrics.txt") << table;
  std::cout << table;
  return 0;
}

int oracle_cmd(const Common& c) {
  const cosafe::Benchmark bench = load(c);
  const cosafe::RunConfig& cfg = bench.config;
  const cosafe::GridSpec grid = cosafe::GridConfig{cfg.oracle.n, cfg.grid.pad_cells}.spec(cfg.benchmark);
  const auto samples = cosafe::control_samples(bench.system.control_set, cfg.oracle.control_directions);
  const double T = cfg.benchmark.horizon;
  cosafe::ValueField vs = cosafe::dp_safety(bench.system, bench.spec.constraint, grid, T,
                                            cfg.oracle.dt, samples);
  cosafe::ValueField v1 =
      cosafe::dp_state_constrained(bench.system, bench.spec, grid, T, cfg.oracle.dt, samples);
  cosafe::ValueField v = cosafe::dp_control_constrained(bench.system, bench.spec, vs, grid, T,
                                                        cfg.oracle.dt, samples,
                                                        cfg.solver.safe_controls);
  for (cosafe::ValueField* f : {&vs, &v1, &v}) f->meta.config_hash = bench.hash;
  const fs::path dir(c.out_dir);
  cosafe::save_field((dir / "oracle_vs.bin").string(), vs);
  cosafe::save_field((dir / "oracle_v1.bin").string(), v1);
  cosafe::save_field((dir / "oracle_v.bin").string(), v);
  const double gap = cosafe::masked_max_difference(v1, v, vs, 2.0 * grid.max_spacing());
  std::cout << "oracle grid " << cfg.oracle.n << ": max |V1 - V| on {V_s >= 2h} = " << gap
            << " (h = " << grid.max_spacing() << ")\n";
  return 0;
}

int export_cmd(const Common& c, const std::string& method, int count) {
  const cosafe::Benchmark bench = load(c);
  const fs::path dir(c.out_dir);
  const cosafe::ValueField vs = load_checked(dir / "vs.bin", bench);
  std::optional<cosafe::ValueField> v;
  if (method == "ours" || fs::exists(dir / "v.bin")) v = load_checked(dir / "v.bin", bench);

  {
    std::ofstream out(dir / "zero_level_vs.csv");
    out << "x0,y0,x1,y1\n" << std::setprecision(10);
    for (const auto& s : cosafe::zero_level_segments(vs.grid, vs.initial())) {
      out << s.x0 << ',' << s.y0 << ',' << s.x1 << ',' << s.y1 << '\n';
    }
  }
  {
    std::ofstream out(dir / "obstacles.csv");
    out << "cx,cy,radius\n";
    for (const auto& o : bench.config.benchmark.obstacles) {
      out << o.center[0] << ',' << o.center[1] << ',' << o.radius << '\n';
    }
  }

  auto x0 = cosafe::benchmark_initial_states(bench, vs);
  if (count >= 0 && static_cast<std::size_t>(count) < x0.size()) x0.resize(count);
  std::vector<cosafe::Trajectory> trajectories;
  cosafe::run_method(bench, method, vs, v ? &*v : nullptr, x0, 0.0, &trajectories);
  const fs::path traj_dir = dir / "trajectories" / method;
  fs::create_directories(traj_dir);
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    std::ostringstream name;
    name << "seed_" << std::setw(3) << std::setfill('0') << i << ".csv";
    std::ofstream out(traj_dir / name.str());
    cosafe::write_trajectory_csv(out, trajectories[i], bench.spec, &vs, v ? &*v : nullptr);
  }
  std::cout << "wrote " << trajectories.size() << " trajectories to " << traj_dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safety and performance co-optimisation on grids"};
  app.require_subcommand(1);

  Common common;
  std::string method = "ours";
  std::vector<std::string> inputs;
  int count = -1;

  auto* safety = app.add_subcommand("solve-safety", "Solve the safety value function");
  auto* perf = app.add_subcommand("solve-perf", "Solve the performance value function");
  auto* roll = app.add_subcommand("rollout", "Roll out one method from every seed");
  auto* cmp = app.add_subcommand("compare", "Compare rollout results against ours");
  auto* orc = app.add_subcommand("oracle", "Brute-force dynamic programming on the oracle grid");
  auto* exp = app.add_subcommand("export-plots", "Write trajectory and level-set CSVs");
  for (CLI::App* cmd : {safety, perf, roll, cmp, orc, exp}) add_common(cmd, common);
  const std::vector<std::string> methods = cosafe::method_names();
  for (CLI::App* cmd : {roll, exp}) {
    cmd->add_option("--method", method, "Controller")
        ->check(CLI::IsMember(methods))
        ->capture_default_str();
  }
  cmp->add_option("inputs", inputs, "Rollout result files (default: all in --out)");
  exp->add_option("--count", count, "Number of seeds to export (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*safety) return solve_safety_cmd(common);
    if (*perf) return solve_perf_cmd(common);
    if (*roll) return rollout_cmd(common, method);
    if (*cmp) return compare_cmd(common, inputs);
    if (*orc) return oracle_cmd(common);
    if (*exp) return export_cmd(common, method, count);
  } catch (const std::exception& e) {
    json err{{"error", e.what()}};
    std::cerr << err.dump() << '\n';
    return 1;
  }
  return 1;
}
