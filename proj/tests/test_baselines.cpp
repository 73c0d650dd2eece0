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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cosafe/baselines.hpp"
#include "test_support.hpp"

namespace cosafe {
namespace {

using testing::vec;

MppiParams small_mppi() {
  MppiParams p;
  p.horizon_steps = 20;
  p.samples = 64;
  return p;
}

ProblemSpec goal_spec(const Vec& goal) {
  ProblemSpec p;
  p.running_cost = [goal](const StateVec& x, const ControlVec&) { return (x - goal).norm(); };
  p.terminal_cost = [](const StateVec&) { return 0.0; };
  p.constraint = [](const StateVec&) { return 1.0; };
  p.horizon = 2.0;
  return p;
}

ValueField affine_field(const GridSpec& g, double a0, double a1, double a2, double at) {
  ValueField f;
  f.grid = g;
  f.times = {0.0, 1.0, 2.0};
  for (double t : f.times) {
    f.slices.push_back(
        sample_nodes(g, [&](const StateVec& x) { return a0 + a1 * x[0] + a2 * x[1] + at * t; }));
  }
  return f;
}

TEST(Mppi, ZeroNoiseReturnsNominal) {
  const auto [sys, spec] = testing::default_benchmark();
  MppiParams p = small_mppi();
  p.sigma = 0.0;
  MppiPlanner planner(sys, spec, p, 1);
  std::vector<ControlVec> nominal(p.horizon_steps, vec({0.3, -0.4}));
  nominal[0] = vec({-0.2, 0.7});
  planner.set_nominal(nominal);
  EXPECT_EQ(planner.plan(vec({-2, 0})), vec({-0.2, 0.7}));
  // Warm start shifts the plan by one step.
  EXPECT_EQ(planner.nominal().front(), vec({0.3, -0.4}));
}

TEST(Mppi, SmallTemperatureSelectsBestSample) {
  const auto [sys, spec] = testing::default_benchmark();
  MppiParams p = small_mppi();
  p.lambda = 1e-9;
  MppiPlanner planner(sys, spec, p, 3);
  const ControlVec u = planner.plan(vec({-2, 0.5}));
  const auto& costs = planner.last_costs();
  const auto best = std::min_element(costs.begin(), costs.end()) - costs.begin();
  EXPECT_LE((u - planner.last_samples()[best][0]).norm(), 1e-12);
}

TEST(Mppi, SamplesAndControlsStayAdmissible) {
  const auto [sys, spec] = testing::default_benchmark();
  MppiParams p = small_mppi();
  p.sigma = 3.0;
  MppiPlanner planner(sys, spec, p, 4);
  for (int k = 0; k < 5; ++k) {
    const ControlVec u = planner.plan(vec({-2, 0.5}));
    EXPECT_TRUE(sys.control_set.contains(u));
    for (const auto& seq : planner.last_samples()) {
      for (const auto& c : seq) ASSERT_TRUE(sys.control_set.contains(c));
    }
  }
}

TEST(Mppi, SameSeedSameRollout) {
  const auto [sys, spec] = testing::default_benchmark();
  auto run = [&, &sys = sys, &spec = spec](std::uint64_t seed, Execution e) {
    MppiParams p = small_mppi();
    p.execution = e;
    const Policy policy = mppi_policy(sys, spec, p, seed);
    std::vector<ControlVec> us;
    StateVec x = vec({-2, 0.5});
    for (int k = 0; k < 30; ++k) {
      us.push_back(policy(x, 0.01 * k));
      x = x + 0.01 * sys.flow_unchecked(x, us.back());
    }
    return us;
  };
  EXPECT_EQ(run(9, Execution::kParallel), run(9, Execution::kParallel));
  EXPECT_EQ(run(9, Execution::kSerial), run(9, Execution::kParallel));
  EXPECT_NE(run(9, Execution::kParallel), run(10, Execution::kParallel));
}

TEST(Mppi, HoldsControlBetweenPlans) {
  const auto [sys, spec] = testing::default_benchmark();
  const Policy policy = mppi_policy(sys, spec, small_mppi(), 2);
  const ControlVec a = policy(vec({-2, 0.5}), 0.0);
  EXPECT_EQ(policy(vec({-1.9, 0.5}), 0.01), a);
  EXPECT_NE(policy(vec({-1.8, 0.5}), 0.02), a);
}

TEST(Mppi, RejectsBadParameters) {
  const auto [sys, spec] = testing::default_benchmark();
  MppiParams p = small_mppi();
  p.samples = 0;
  EXPECT_THROW(MppiPlanner(sys, spec, p, 1), ConfigError);
  p = small_mppi();
  p.sigma = -1;
  EXPECT_THROW(MppiPlanner(sys, spec, p, 1), ConfigError);
}

class Filter : public ::testing::Test {
 protected:
  void SetUp() override {
    sys = testing::integrator();
    sys.drift = [](const StateVec&) { return vec({0.5, 0.0}); };
  }
  SystemModel sys;
  GridSpec grid{{-1, -1}, {1, 1}, {11, 11}};
};

TEST_F(Filter, PassesNominalDeepInsideSafeSet) {
  const ValueField vs = affine_field(grid, 1.0, 0.0, 0.0, 0.0);
  const Policy f = filtered_policy(
      [](const StateVec&, double) { return vec({0.2, 0.3}); }, vs, sys, 0.0);
  EXPECT_EQ(f(vec({0, 0}), 0.5), vec({0.2, 0.3}));
}

TEST_F(Filter, ProjectsOntoBand) {
  // V_s = x1 - 0.2 t - 10: band u1 = -0.3 (see the safe-control example).
  const ValueField vs = affine_field(grid, -10.0, 1.0, 0.0, -0.2);
  const Policy f = filtered_policy(
      [](const StateVec&, double) { return vec({0.5, 0.0}); }, vs, sys, 0.0);
  const ControlVec u = f(vec({0, 0}), 0.5);
  EXPECT_NEAR(u[0], -0.3, 1e-6);
  EXPECT_NEAR(u[1], 0.0, 1e-12);

  const Policy g = filtered_policy(
      [](const StateVec&, double) { return vec({-0.3, 0.4}); }, vs, sys, 0.0);
  EXPECT_EQ(g(vec({0, 0}), 0.5), vec({-0.3, 0.4}));
}

TEST_F(Filter, CountsFallbacks) {
  // c0 = 1.8 cannot be compensated by a unit control.
  sys.drift = [](const StateVec&) { return vec({2.0, 0.0}); };
  const ValueField vs = affine_field(grid, -10.0, 1.0, 0.0, -0.2);
  PolicyStats stats;
  const Policy f = filtered_policy(
      [](const StateVec&, double) { return vec({0.0, 0.0}); }, vs, sys, 0.0, {}, &stats);
  EXPECT_EQ(f(vec({0, 0}), 0.5), vec({1.0, 0.0}));
  EXPECT_EQ(stats.fallbacks, 1u);
}

TEST(Mpc, HeadsStraightForTheGoalWithoutObstacles) {
  const SystemModel sys = testing::integrator();
  const ProblemSpec spec = goal_spec(vec({1.0, 0.0}));
  MpcPlanner planner(sys, spec, MpcParams{});
  const StateVec x = vec({-1.0, 0.5});
  const ControlVec u = planner.plan(x);
  const Vec descent = (vec({1.0, 0.0}) - x).normalized();
  const double angle = std::acos(std::clamp(u.normalized().dot(descent), -1.0, 1.0));
  EXPECT_LT(angle, 5.0 * std::numbers::pi / 180.0);
  EXPECT_TRUE(sys.control_set.contains(u));
}

TEST(Mpc, ZeroBudgetReturnsWarmStart) {
  const auto [sys, spec] = testing::default_benchmark();
  MpcParams p;
  p.iterations = 0;
  MpcPlanner planner(sys, spec, p);
  EXPECT_EQ(planner.plan(vec({-2, 0})), vec({0, 0}));
}

TEST(Mpc, DeterministicAndAdmissible) {
  const auto [sys, spec] = testing::default_benchmark();
  MpcParams p;
  p.iterations = 30;
  auto run = [&, &sys = sys, &spec = spec](Execution e) {
    p.execution = e;
    const Policy policy = mpc_policy(sys, spec, p);
    std::vector<ControlVec> us;
    StateVec x = vec({-2.5, -1.0});
    for (int k = 0; k < 40; ++k) {
      us.push_back(policy(x, 0.01 * k));
      EXPECT_TRUE(sys.control_set.contains(us.back()));
      x = x + 0.01 * sys.flow_unchecked(x, us.back());
    }
    return us;
  };
  EXPECT_EQ(run(Execution::kParallel), run(Execution::kParallel));
  EXPECT_EQ(run(Execution::kSerial), run(Execution::kParallel));
}

}  // namespace
}  // namespace cosafe
