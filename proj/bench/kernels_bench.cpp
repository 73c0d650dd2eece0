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

// Serial against OpenMP execution of the heavy kernels. The argument is the
// grid size (nodes across the arena); the second argument selects parallel.

#include <benchmark/benchmark.h>

#include "cosafe/baselines.hpp"
#include "cosafe/oracle.hpp"
#include "cosafe/pipeline.hpp"

namespace {

cosafe::Benchmark make(int n, bool parallel) {
  cosafe::RunConfig c = cosafe::config_from_json(nlohmann::json::object());
  c.grid.n = n;
  c.solver.execution = parallel ? cosafe::Execution::kParallel : cosafe::Execution::kSerial;
  c.mppi.execution = c.solver.execution;
  return cosafe::make_benchmark(c);
}

void BM_SolveSafety(benchmark::State& state) {
  const cosafe::Benchmark b = make(static_cast<int>(state.range(0)), state.range(1) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(cosafe::solve_benchmark_safety(b));
}

void BM_SolvePerformance(benchmark::State& state) {
  const cosafe::Benchmark b = make(static_cast<int>(state.range(0)), state.range(1) != 0);
  const cosafe::ValueField vs = cosafe::solve_benchmark_safety(b);
  for (auto _ : state) benchmark::DoNotOptimize(cosafe::solve_benchmark_performance(b, vs));
}

void BM_DpSafety(benchmark::State& state) {
  const cosafe::Benchmark b = make(static_cast<int>(state.range(0)), state.range(1) != 0);
  const auto samples = cosafe::control_samples(b.system.control_set, 16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cosafe::dp_safety(b.system, b.spec.constraint, b.grid,
                                               b.spec.horizon, 0.05, samples,
                                               b.config.solver.execution));
  }
}

void BM_MppiPlan(benchmark::State& state) {
  const cosafe::Benchmark b = make(70, state.range(0) != 0);
  cosafe::MppiPlanner planner(b.system, b.spec, b.config.mppi, 1);
  cosafe::StateVec x(2);
  x << -2.5, 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(planner.plan(x));
}

}  // namespace

BENCHMARK(BM_SolveSafety)->ArgsProduct({{41, 70}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolvePerformance)->ArgsProduct({{41, 70}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DpSafety)->ArgsProduct({{21}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MppiPlan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
