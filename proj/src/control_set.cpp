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

#include "cosafe/control_set.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace cosafe {

namespace {

// Squared normals below this are treated as "no hyperplane".
constexpr double kTinyNormSq = 1e-24;

// Disc {u : a^T u = b, |u| <= radius}: projection of u onto it.
ControlVec project_onto_ball_hyperplane(const ControlVec& u, const Vec& a, double b,
                                        double radius) {
  const double na2 = a.squaredNorm();
  const double bmax = radius * std::sqrt(na2);
  b = std::clamp(b, -bmax, bmax);
  const Vec centre = (b / na2) * a;
  const Vec in_plane = u - ((a.dot(u) - b) / na2) * a;
  const Vec w = in_plane - centre;
  const double disc_radius = std::sqrt(std::max(0.0, radius * radius - b * b / na2));
  const double nw = w.norm();
  if (nw <= disc_radius) return in_plane;
  return centre + (disc_radius / nw) * w;
}

// argmin c^T u over {lo <= u <= hi, a^T u = b}. Parametric in the multiplier
// of the equality: each coordinate flips from one bound to the other at
// lambda = c_i / a_i, and a^T u grows monotonically across the flips.
ControlVec box_linear_on_hyperplane(const Vec& c, const Vec& a, double b, const Vec& lo,
                                    const Vec& hi) {
  const int m = static_cast<int>(c.size());
  ControlVec u(m);
  std::array<int, kMaxDim> order{};
  int active = 0;
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    if (a[i] == 0.0) {
      u[i] = c[i] > 0 ? lo[i] : (c[i] < 0 ? hi[i] : std::clamp(0.0, lo[i], hi[i]));
    } else {
      u[i] = a[i] > 0 ? lo[i] : hi[i];
      order[active++] = i;
    }
    s += a[i] * u[i];
  }
  std::sort(order.begin(), order.begin() + active,
            [&](int i, int j) { return c[i] / a[i] < c[j] / a[j]; });
  for (int k = 0; k < active; ++k) {
    const int i = order[k];
    const double other = a[i] > 0 ? hi[i] : lo[i];
    const double gain = a[i] * (other - u[i]);
    if (s + gain >= b) {
      u[i] += (b - s) / a[i];
      return u;
    }
    s += gain;
    u[i] = other;
  }
  return u;  // b above the reachable range: the a^T u maximiser
}

// Projection onto {lo <= u <= hi, a^T u = b} by bisection on the shift
// along a; a^T clamp(u + mu a) is nondecreasing in mu.
ControlVec project_onto_box_hyperplane(const ControlVec& u, const Vec& a, double b,
                                       const Vec& lo, const Vec& hi) {
  auto at = [&](double mu) -> ControlVec {
    ControlVec v = u + mu * a;
    for (int i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i], lo[i], hi[i]);
    return v;
  };
  // Beyond |mu| = reach every coordinate with a_i != 0 is saturated.
  double span = 1.0;
  double amin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < u.size(); ++i) {
    span += std::abs(u[i]) + std::abs(hi[i]) + std::abs(lo[i]);
    if (a[i] != 0.0) amin = std::min(amin, std::abs(a[i]));
  }
  const double reach = span / amin;
  double mlo = -reach;
  double mhi = reach;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (mlo + mhi);
    if (a.dot(at(mid)) < b) {
      mlo = mid;
    } else {
      mhi = mid;
    }
  }
  return at(0.5 * (mlo + mhi));
}

}  // namespace

ControlSet ControlSet::ball(int dim, double radius) {
  if (dim < 1 || dim > kMaxDim) throw ConfigError("control set: bad dimension");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ConfigError("control set: ball radius must be positive");
  }
  ControlSet s;
  s.kind_ = Kind::kBall;
  s.dim_ = dim;
  s.radius_ = radius;
  return s;
}

ControlSet ControlSet::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size() || lo.size() < 1) throw ConfigError("control set: bad box");
  for (int i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) throw ConfigError("control set: box needs lo < hi on every axis");
  }
  ControlSet s;
  s.kind_ = Kind::kBox;
  s.dim_ = static_cast<int>(lo.size());
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

bool ControlSet::contains(const ControlVec& u, double tol) const {
  if (u.size() != dim_) return false;
  if (kind_ == Kind::kBall) return u.norm() <= radius_ + tol;
  for (int i = 0; i < dim_; ++i) {
    if (u[i] < lo_[i] - tol || u[i] > hi_[i] + tol) return false;
  }
  return true;
}

ControlVec ControlSet::project(const ControlVec& u) const {
  if (kind_ == Kind::kBall) {
    const double n = u.norm();
    return n <= radius_ ? u : ControlVec((radius_ / n) * u);
  }
  ControlVec v = u;
  for (int i = 0; i < dim_; ++i) v[i] = std::clamp(v[i], lo_[i], hi_[i]);
  return v;
}

Vec ControlSet::axis_bound() const {
  if (kind_ == Kind::kBall) return Vec::Constant(dim_, radius_);
  return lo_.cwiseAbs().cwiseMax(hi_.cwiseAbs());
}

ControlVec ControlSet::argmin_linear(const Vec& c) const {
  if (kind_ == Kind::kBall) {
    const double n = c.norm();
    if (n == 0.0) return ControlVec::Zero(dim_);
    return (-radius_ / n) * c;
  }
  ControlVec u(dim_);
  for (int i = 0; i < dim_; ++i) {
    u[i] = c[i] > 0 ? lo_[i] : (c[i] < 0 ? hi_[i] : std::clamp(0.0, lo_[i], hi_[i]));
  }
  return u;
}

double ControlSet::support(const Vec& a) const {
  if (kind_ == Kind::kBall) return radius_ * a.norm();
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += std::max(a[i] * lo_[i], a[i] * hi_[i]);
  return s;
}

ControlVec min_linear_on_ball_hyperplane(const Vec& c, const Vec& a, double b, double radius,
                                         double tol) {
  const double na2 = a.squaredNorm();
  if (!(na2 > 0.0)) throw ContractViolation("min_linear_on_ball_hyperplane: zero normal");
  const double na = std::sqrt(na2);
  if (std::abs(b) > radius * na + tol) {
    throw QueryError("min_linear_on_ball_hyperplane: hyperplane misses the ball");
  }
  b = std::clamp(b, -radius * na, radius * na);
  const Vec centre = (b / na2) * a;
  const Vec c_perp = c - (c.dot(a) / na2) * a;
  const double ncp = c_perp.norm();
  // Tangentially flat objective: every feasible point ties.
  if (ncp <= 1e-14 * (c.norm() + 1e-300)) return centre;
  const double disc_radius = std::sqrt(std::max(0.0, radius * radius - b * b / na2));
  return centre - (disc_radius / ncp) * c_perp;
}

ControlVec min_linear_on_slab(const ControlSet& set, const Vec& c, const Vec& a, double b_lo,
                              double b_hi) {
  const ControlVec best = set.argmin_linear(c);
  if (a.squaredNorm() < kTinyNormSq) return best;
  const double s = a.dot(best);
  if (s >= b_lo && s <= b_hi) return best;
  // The optimum sits on the face the unconstrained minimiser overshoots.
  const double lo_reach = -set.support(-a);
  const double hi_reach = set.support(a);
  const double b = std::clamp(s < b_lo ? b_lo : b_hi, lo_reach, hi_reach);
  if (set.kind() == ControlSet::Kind::kBall) {
    return min_linear_on_ball_hyperplane(c, a, b, set.radius(), 1e300);
  }
  return box_linear_on_hyperplane(c, a, b, set.lo(), set.hi());
}

ControlVec project_onto_slab(const ControlSet& set, const ControlVec& u, const Vec& a,
                             double b_lo, double b_hi) {
  const ControlVec p = set.project(u);
  if (a.squaredNorm() < kTinyNormSq) return p;
  const double s = a.dot(p);
  if (s >= b_lo && s <= b_hi) return p;
  const double lo_reach = -set.support(-a);
  const double hi_reach = set.support(a);
  auto onto = [&](double b) -> ControlVec {
    b = std::clamp(b, lo_reach, hi_reach);
    if (set.kind() == ControlSet::Kind::kBall) {
      return project_onto_ball_hyperplane(u, a, b, set.radius());
    }
    return project_onto_box_hyperplane(u, a, b, set.lo(), set.hi());
  };
  const ControlVec lower = onto(b_lo);
  const ControlVec upper = onto(b_hi);
  return (lower - u).squaredNorm() <= (upper - u).squaredNorm() ? lower : upper;
}

}  // namespace cosafe
