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

#ifndef COSAFE_CONTROL_SET_HPP
#define COSAFE_CONTROL_SET_HPP

#include "cosafe/types.hpp"

namespace cosafe {

/// Convex admissible control set: a Euclidean ball centred at the origin or
/// an axis-aligned box.
class ControlSet {
 public:
  enum class Kind { kBall, kBox };

  static ControlSet ball(int dim, double radius);
  static ControlSet box(Vec lo, Vec hi);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double radius() const { return radius_; }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }

  bool contains(const ControlVec& u, double tol = 1e-9) const;
  /// Nearest admissible control.
  ControlVec project(const ControlVec& u) const;
  /// Largest |u_i| over the set, per axis.
  Vec axis_bound() const;

  /// argmin of c^T u over the set. Ties (c = 0, or c_i = 0 on a box axis)
  /// resolve to the minimum-norm minimiser.
  ControlVec argmin_linear(const Vec& c) const;
  /// max of a^T u over the set (the support function).
  double support(const Vec& a) const;

 private:
  Kind kind_ = Kind::kBall;
  int dim_ = 0;
  double radius_ = 0.0;
  Vec lo_, hi_;
};

/// Exact minimiser of c^T u subject to ||u|| <= radius and a^T u = b.
/// Writes u = (b/|a|^2) a + w with w orthogonal to a and pushes w against the
/// tangential part of c. With a tangentially flat objective the minimum-norm
/// feasible point is returned. Throws ContractViolation when |a| = 0 and
/// QueryError when |b| > radius |a| + tol.
ControlVec min_linear_on_ball_hyperplane(const Vec& c, const Vec& a, double b, double radius,
                                         double tol = 1e-9);

/// argmin of c^T u over {u in set : b_lo <= a^T u <= b_hi}. The slab is
/// assumed to intersect the set (callers check with support()).
ControlVec min_linear_on_slab(const ControlSet& set, const Vec& c, const Vec& a, double b_lo,
                              double b_hi);

/// Euclidean projection of u onto {u in set : b_lo <= a^T u <= b_hi}.
ControlVec project_onto_slab(const ControlSet& set, const ControlVec& u, const Vec& a,
                             double b_lo, double b_hi);

}  // namespace cosafe

#endif  // COSAFE_CONTROL_SET_HPP
