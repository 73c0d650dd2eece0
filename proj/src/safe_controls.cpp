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

#include "cosafe/safe_controls.hpp"

#include <algorithm>

namespace cosafe {

SafeControlSet classify_safe_controls(double value, double dvdt, const Vec& grad,
                                      const StateVec& drift, const Mat& jacobian,
                                      const ControlSet& admissible,
                                      const SafeControlOptions& options) {
  SafeControlSet set;
  set.admissible = admissible;
  set.gamma = options.gamma;
  set.safety_value = value;
  if (value > 0.0) {
    set.kind = SafeControlSet::Kind::kFull;
    return set;
  }
  const double c0 = dvdt + grad.dot(drift);
  set.a = jacobian.transpose() * grad;
  set.b_lo = -options.gamma - c0 - options.band_tol;
  set.b_hi = -c0 + options.band_tol;

  const double hi_reach = admissible.support(set.a);
  const double lo_reach = -admissible.support(-set.a);
  if (set.b_lo > hi_reach) {
    if (set.b_lo - hi_reach <= options.feasibility_tol) {
      set.kind = SafeControlSet::Kind::kBand;
      set.b_lo = set.b_hi = hi_reach;
      set.snapped = true;
      return set;
    }
  } else if (set.b_hi < lo_reach) {
    // Every control raises V_s faster than the band allows.
    if (lo_reach - set.b_hi <= options.feasibility_tol) {
      set.kind = SafeControlSet::Kind::kBand;
      set.b_lo = set.b_hi = lo_reach;
      set.snapped = true;
      return set;
    }
  } else {
    set.kind = SafeControlSet::Kind::kBand;
    return set;
  }
  set.kind = SafeControlSet::Kind::kFallback;
  set.fallback_control = admissible.argmin_linear(-set.a);
  return set;
}

SafeControlSet query_safe_controls(const ValueField& vs, const SystemModel& system,
                                   const StateVec& x, double t,
                                   const SafeControlOptions& options) {
  const Sample v = value_at(vs, x, t);
  const double dvdt = time_derivative(vs, x, t);
  const GradientSample g = gradient_at(vs, x, t);
  SafeControlSet set = classify_safe_controls(v.value, dvdt, g.gradient, system.drift(x),
                                              system.control_jacobian(x),
                                              system.control_set, options);
  set.clamped = v.clamped || g.clamped;
  return set;
}

bool contains(const SafeControlSet& set, const ControlVec& u, double tol) {
  if (!set.admissible.contains(u, tol)) return false;
  switch (set.kind) {
    case SafeControlSet::Kind::kFull:
      return true;
    case SafeControlSet::Kind::kBand: {
      const double s = set.a.dot(u);
      return s >= set.b_lo - tol && s <= set.b_hi + tol;
    }
    case SafeControlSet::Kind::kFallback:
      return (u - set.fallback_control).norm() <= tol;
  }
  return false;
}

ControlVec min_linear_over_safe_set(const SafeControlSet& set, const Vec& c) {
  switch (set.kind) {
    case SafeControlSet::Kind::kFull:
      return set.admissible.argmin_linear(c);
    case SafeControlSet::Kind::kBand:
      return min_linear_on_slab(set.admissible, c, set.a, set.b_lo, set.b_hi);
    case SafeControlSet::Kind::kFallback:
      break;
  }
  return set.fallback_control;
}

ControlVec project_onto_safe_set(const SafeControlSet& set, const ControlVec& u) {
  switch (set.kind) {
    case SafeControlSet::Kind::kFull:
      return set.admissible.project(u);
    case SafeControlSet::Kind::kBand:
      return project_onto_slab(set.admissible, u, set.a, set.b_lo, set.b_hi);
    case SafeControlSet::Kind::kFallback:
      break;
  }
  return set.fallback_control;
}

}  // namespace cosafe
