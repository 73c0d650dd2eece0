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

#ifndef COSAFE_HJ_SOLVER_HPP
#define COSAFE_HJ_SOLVER_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cosafe/grid.hpp"
#include "cosafe/safe_controls.hpp"
#include "cosafe/system_model.hpp"

namespace cosafe {

enum class Dissipation { kGlobalLaxFriedrichs };

struct SolverSettings {
  double cfl = 0.5;         // in (0, 1]
  double store_dt = 0.01;   // spacing of the stored time ladder, seconds
  Dissipation dissipation = Dissipation::kGlobalLaxFriedrichs;
  int spatial_order = 1;
  Execution execution = Execution::kParallel;
  /// Safe-control construction used by the performance solver.
  SafeControlOptions safe_controls;

  /// Throws ConfigError on an out-of-range setting.
  void validate() const;
};

/// Stored time ladder {0, store_dt, ..., T}. Throws ConfigError unless
/// store_dt divides T within 1e-9.
std::vector<double> time_ladder(double horizon, double store_dt);

/// Per-axis bound on |dH/dp_i| over the grid: max |f1_i(x)| + max over the
/// full control set of |(f2(x) u)_i|.
std::vector<double> dissipation_bounds(const SystemModel& system, const GridSpec& grid);

/// Internal step: the CFL step cfl / sum(alpha_i / h_i), shrunk so that an
/// integer number of steps spans store_dt exactly. Throws SolverError when
/// the step degenerates.
double internal_step(const std::vector<double>& alpha, const GridSpec& grid,
                     const SolverSettings& settings, int* substeps);

/// Node Hamiltonian callback: H(x_node, p) for the averaged upwind costate.
using NodeHamiltonian = std::function<double(std::size_t node, const Vec& p)>;

/// Backward-time rate dV/d(-t) for every node: the Lax-Friedrichs numerical
/// Hamiltonian H(x, (p+ + p-)/2) + sum_i alpha_i (p+_i - p-_i) / 2 with
/// first-order one-sided differences and linearly extrapolated ghost nodes.
void lax_friedrichs_rate(const GridSpec& grid, std::span<const double> values,
                         const std::vector<double>& alpha, const NodeHamiltonian& hamiltonian,
                         std::span<double> rate, Execution execution);

/// Safety value function: backward HJB variational inequality with
/// V_s(., T) = l, TVD-RK2 in time, and V_s <- min(V_s, l, V_s before the
/// step) after every step, which keeps V_s nondecreasing in t.
ValueField solve_safety(const SystemModel& system,
                        const std::function<double(const StateVec&)>& constraint,
                        const GridSpec& grid, double horizon, const SolverSettings& settings);

/// Performance value function: backward control-constrained HJB PDE with
/// V(., T) = phi, minimising over the safe-control set of vs at every node
/// and stage time. Nodes with V_s(x, 0) < 0 are listed as unreliable.
ValueField solve_performance(const SystemModel& system, const ProblemSpec& spec,
                             const ValueField& vs, const GridSpec& grid,
                             const SolverSettings& settings);

}  // namespace cosafe

#endif  // COSAFE_HJ_SOLVER_HPP
