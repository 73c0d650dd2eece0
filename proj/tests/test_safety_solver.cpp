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

#include <cmath>

#include <gtest/gtest.h>

#include "cosafe/hj_solver.hpp"
#include "cosafe/oracle.hpp"
#include "test_support.hpp"

namespace cosafe {
namespace {

using testing::vec;

TEST(Settings, Validation) {
  SolverSettings s;
  EXPECT_NO_THROW(s.validate());
  s.cfl = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s.cfl = 1.5;
  EXPECT_THROW(s.validate(), ConfigError);
  s = SolverSettings{};
  s.store_dt = -1.0;
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(TimeLadder, DividesHorizon) {
  const auto t = time_ladder(2.0, 0.01);
  ASSERT_EQ(t.size(), 201u);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 2.0);
  EXPECT_EQ(time_ladder(0.0, 0.01), std::vector<double>{0.0});
  EXPECT_THROW(time_ladder(2.0, 0.03), ConfigError);
}

TEST(DissipationBounds, BenchmarkClosedForm) {
  const auto [sys, spec] = testing::default_benchmark();
  const GridSpec g({-1, -2}, {1, 2}, {5, 5});
  const auto alpha = dissipation_bounds(sys, g);
  // |f1_1| peaks where x2 = 0: 2, plus the unit control reach.
  EXPECT_DOUBLE_EQ(alpha[0], 3.0);
  EXPECT_DOUBLE_EQ(alpha[1], 1.0);
  int substeps = 0;
  SolverSettings s;
  const double dt = internal_step(alpha, g, s, &substeps);
  EXPECT_LE(dt * (alpha[0] / g.spacing(0) + alpha[1] / g.spacing(1)), s.cfl + 1e-12);
  EXPECT_NEAR(dt * substeps, s.store_dt, 1e-15);
}

TEST(SolveSafety, ZeroHorizonIsTerminalCondition) {
  const auto [sys, spec] = testing::default_benchmark();
  const GridSpec g = GridSpec::padded({-3, -2}, {2, 2}, {21, 21}, 4);
  const ValueField vs = solve_safety(sys, spec.constraint, g, 0.0, SolverSettings{});
  ASSERT_EQ(vs.times.size(), 1u);
  EXPECT_EQ(vs.slices[0], sample_nodes(g, spec.constraint));
}

TEST(SolveSafety, HoldingSystemKeepsInteriorValues) {
  // x' = u can stop anywhere, so V_s = l wherever l > 0.
  const SystemModel sys = testing::integrator();
  auto l = [](const StateVec& x) { return box_signed_distance(x, {-2, -2}, {2, 2}); };
  const GridSpec g = GridSpec::padded({-2, -2}, {2, 2}, {41, 41}, 4);
  const ValueField vs = solve_safety(sys, l, g, 1.0, SolverSettings{});
  const double h = g.max_spacing();
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    const StateVec x = g.node(i);
    if (l(x) > 0.5) EXPECT_NEAR(vs.initial()[i], l(x), 2 * h);
  }
  const auto samples = control_samples(sys.control_set, 16);
  const ValueField dp = dp_safety(sys, l, g, 1.0, 0.05, samples);
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    if (l(g.node(i)) >= 0) EXPECT_NEAR(vs.initial()[i], dp.initial()[i], 5 * h);
  }
}

class BenchmarkSafety : public ::testing::Test {
 protected:
  const testing::SolvedBenchmark& solved = testing::solved_benchmark(70);
};

TEST_F(BenchmarkSafety, TerminalSliceIsExact) {
  const ValueField& vs = solved.vs;
  const auto l = sample_nodes(vs.grid, solved.bench.spec.constraint);
  EXPECT_EQ(vs.terminal(), l);
  EXPECT_EQ(vs.times.size(), 201u);
  EXPECT_EQ(vs.meta.kind, "safety");
}

TEST_F(BenchmarkSafety, BoundedByConstraintAndMonotoneInTime) {
  const ValueField& vs = solved.vs;
  const auto l = sample_nodes(vs.grid, solved.bench.spec.constraint);
  for (std::size_t k = 0; k < vs.times.size(); ++k) {
    for (std::size_t i = 0; i < l.size(); ++i) {
      ASSERT_LE(vs.slices[k][i], l[i]) << "node " << i << " slice " << k;
      if (k + 1 < vs.times.size()) {
        ASSERT_LE(vs.slices[k][i], vs.slices[k + 1][i] + 1e-9) << "node " << i << " slice " << k;
      }
      if (l[i] < 0.0) ASSERT_LT(vs.slices[k][i], 0.0);
    }
  }
}

TEST_F(BenchmarkSafety, SafeSetLiesInsideArenaAndOffObstacles) {
  const ValueField& vs = solved.vs;
  const auto& spec = solved.bench.spec;
  std::size_t safe = 0;
  for (std::size_t i = 0; i < vs.grid.num_nodes(); ++i) {
    // Nodes on the arena edge can hold V_s = l = 0 exactly.
    if (vs.initial()[i] <= 0.0) continue;
    ++safe;
    const StateVec x = vs.grid.node(i);
    EXPECT_GT(spec.constraint(x), 0.0);
    EXPECT_GT(box_signed_distance(x, {-3, -2}, {2, 2}), 0.0);
  }
  EXPECT_GT(safe, vs.grid.num_nodes() / 4);
  // The shadow in front of each obstacle is unsafe even though l > 0 there.
  const StateVec shadow = vec({-0.65, 0.75});
  EXPECT_GT(spec.constraint(shadow), 0.0);
  EXPECT_LT(value_at(vs, shadow, 0.0).value, 0.0);
}

TEST(SolveSafety, SerialAndParallelAgreeBitwise) {
  const auto [sys, spec] = testing::default_benchmark();
  const GridSpec g = GridSpec::padded({-3, -2}, {2, 2}, {31, 31}, 4);
  SolverSettings serial, parallel;
  serial.execution = Execution::kSerial;
  parallel.execution = Execution::kParallel;
  const ValueField a = solve_safety(sys, spec.constraint, g, 1.0, serial);
  const ValueField b = solve_safety(sys, spec.constraint, g, 1.0, parallel);
  EXPECT_EQ(a.slices, b.slices);
}

TEST(SolveSafety, RejectsBadInputs) {
  const auto [sys, spec] = testing::default_benchmark();
  const GridSpec g({-3, -2}, {2, 2}, {11, 11});
  EXPECT_THROW(solve_safety(sys, spec.constraint, g, 1.005, SolverSettings{}), ConfigError);
  EXPECT_THROW(
      solve_safety(sys, [](const StateVec&) { return std::nan(""); }, g, 0.1, SolverSettings{}),
      SolverError);
}

}  // namespace
}  // namespace cosafe
