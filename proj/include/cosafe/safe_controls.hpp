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

#ifndef COSAFE_SAFE_CONTROLS_HPP
#define COSAFE_SAFE_CONTROLS_HPP

#include "cosafe/grid.hpp"
#include "cosafe/system_model.hpp"

namespace cosafe {

struct SafeControlOptions {
  /// Width of the admissible band of d/dt V_s below zero.
  double gamma = 0.0;
  /// Numerical widening of the band on both sides.
  double band_tol = 1e-7;
  /// A band that misses the control set by at most this much (in a^T u
  /// units) is snapped onto the nearest reachable edge instead of falling
  /// back.
  double feasibility_tol = 1e-7;
};

/// Controls that keep the safety value from decreasing at a query point.
///
/// kFull:     every admissible control (V_s > 0).
/// kBand:     admissible u with b_lo <= a^T u <= b_hi, where
///            a = f2^T dV_s/dx and the bounds come from
///            -gamma <= dV_s/dt + dV_s/dx^T f(x, u) <= 0.
/// kFallback: the band misses the control set; only fallback_control, the
///            maximiser of a^T u, is offered.
struct SafeControlSet {
  enum class Kind { kFull, kBand, kFallback };

  Kind kind = Kind::kFull;
  ControlSet admissible;
  Vec a;
  double b_lo = 0.0;
  double b_hi = 0.0;
  double gamma = 0.0;
  ControlVec fallback_control;
  double safety_value = 0.0;  // V_s at the query
  bool snapped = false;       // band moved onto a reachable edge
  bool clamped = false;       // spatial query left the grid
};

/// Classifies from the local safety quantities: value V_s, its time
/// derivative, its spatial gradient, and the dynamics at x.
SafeControlSet classify_safe_controls(double value, double dvdt, const Vec& grad,
                                      const StateVec& drift, const Mat& jacobian,
                                      const ControlSet& admissible,
                                      const SafeControlOptions& options = {});

/// Safe-control set at (x, t) from a solved safety value function. Throws
/// QueryError when t lies outside the stored horizon.
SafeControlSet query_safe_controls(const ValueField& vs, const SystemModel& system,
                                   const StateVec& x, double t,
                                   const SafeControlOptions& options = {});

bool contains(const SafeControlSet& set, const ControlVec& u, double tol = 1e-9);

/// argmin of c^T u over the safe set (fallback: the fallback control).
ControlVec min_linear_over_safe_set(const SafeControlSet& set, const Vec& c);

/// Nearest safe control to u (fallback: the fallback control).
ControlVec project_onto_safe_set(const SafeControlSet& set, const ControlVec& u);

}  // namespace cosafe

#endif  // COSAFE_SAFE_CONTROLS_HPP
