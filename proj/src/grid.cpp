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

#include "cosafe/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace cosafe {

namespace {

constexpr double kTimeSlack = 1e-9;
// Relative snapping distance to a node; makes node queries bit-exact.
constexpr double kNodeSnap = 1e-9;

// Cell containing a point: lower corner and per-axis weight of the upper
// corner.
struct Cell {
  std::array<int, kMaxDim> base{};
  std::array<double, kMaxDim> weight{};
  bool clamped = false;
};

Cell locate(const GridSpec& grid, const StateVec& x) {
  const int d = grid.dims();
  if (x.size() != d) {
    throw QueryError("query point has dimension " + std::to_string(x.size()) +
                     ", grid has " + std::to_string(d));
  }
  Cell cell;
  for (int i = 0; i < d; ++i) {
    if (!std::isfinite(x[i])) throw QueryError("non-finite query point");
    const int n = grid.n()[i];
    double s = (x[i] - grid.lo()[i]) / grid.spacing(i);
    if (s < 0.0 || s > n - 1) {
      cell.clamped = true;
      s = std::clamp(s, 0.0, static_cast<double>(n - 1));
    }
    const double r = std::round(s);
    if (std::abs(s - r) < kNodeSnap) s = r;
    int k = static_cast<int>(std::floor(s));
    if (k > n - 2) k = n - 2;
    cell.base[i] = k;
    cell.weight[i] = s - k;
  }
  return cell;
}

// Visits the 2^d corners of a cell with their multilinear weights.
template <typename Fn>
void for_each_corner(const GridSpec& grid, const Cell& cell, Fn&& fn) {
  const int d = grid.dims();
  const int corners = 1 << d;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t flat = 0;
    for (int i = 0; i < d; ++i) {
      const int bit = (c >> (d - 1 - i)) & 1;
      w *= bit ? cell.weight[i] : 1.0 - cell.weight[i];
      flat += static_cast<std::size_t>(cell.base[i] + bit) * grid.stride(i);
    }
    fn(flat, w);
  }
}

}  // namespace

GridSpec::GridSpec(std::vector<double> lo, std::vector<double> hi, std::vector<int> n)
    : lo_(std::move(lo)), hi_(std::move(hi)), n_(std::move(n)) {
  if (n_.empty() || lo_.size() != n_.size() || hi_.size() != n_.size()) {
    throw ConfigError("grid: lo, hi and n must have the same nonzero length");
  }
  if (dims() > kMaxDim) throw ConfigError("grid: too many axes");
  strides_.assign(n_.size(), 1);
  num_nodes_ = 1;
  for (int i = dims() - 1; i >= 0; --i) {
    if (!(std::isfinite(lo_[i]) && std::isfinite(hi_[i]) && hi_[i] > lo_[i])) {
      throw ConfigError("grid: axis " + std::to_string(i) + " needs finite hi > lo");
    }
    if (n_[i] < 2) throw ConfigError("grid: axis " + std::to_string(i) + " needs n >= 2");
    strides_[i] = num_nodes_;
    num_nodes_ *= static_cast<std::size_t>(n_[i]);
  }
}

double GridSpec::max_spacing() const {
  double h = 0.0;
  for (int i = 0; i < dims(); ++i) h = std::max(h, spacing(i));
  return h;
}

std::vector<int> GridSpec::unflatten(std::size_t flat) const {
  std::vector<int> idx(n_.size());
  for (int i = 0; i < dims(); ++i) {
    idx[i] = static_cast<int>(flat / strides_[i]);
    flat %= strides_[i];
  }
  return idx;
}

std::size_t GridSpec::flatten(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int i = 0; i < dims(); ++i) flat += static_cast<std::size_t>(idx[i]) * strides_[i];
  return flat;
}

StateVec GridSpec::node(std::size_t flat) const {
  StateVec x(dims());
  for (int i = 0; i < dims(); ++i) {
    const int k = static_cast<int>(flat / strides_[i]);
    flat %= strides_[i];
    x[i] = coordinate(i, k);
  }
  return x;
}

GridSpec GridSpec::padded(const std::vector<double>& lo, const std::vector<double>& hi,
                          const std::vector<int>& n, int pad_cells) {
  if (pad_cells < 0) throw ConfigError("grid: pad_cells must be >= 0");
  const GridSpec inner(lo, hi, n);
  std::vector<double> plo(lo.size()), phi(hi.size());
  std::vector<int> pn(n.size());
  for (int i = 0; i < inner.dims(); ++i) {
    const double h = inner.spacing(i);
    plo[i] = lo[i] - pad_cells * h;
    phi[i] = hi[i] + pad_cells * h;
    pn[i] = n[i] + 2 * pad_cells;
  }
  return GridSpec(plo, phi, pn);
}

void ValueField::validate() const {
  if (times.empty()) throw ConfigError("value field: no time stamps");
  if (slices.size() != times.size()) {
    throw ConfigError("value field: slice count does not match time count");
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k])) throw ConfigError("value field: non-finite time stamp");
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw ConfigError("value field: time stamps must be strictly increasing");
    }
    if (slices[k].size() != grid.num_nodes()) {
      throw ConfigError("value field: slice " + std::to_string(k) + " has wrong size");
    }
    for (double v : slices[k]) {
      if (!std::isfinite(v)) {
        throw ConfigError("value field: non-finite value in slice " + std::to_string(k));
      }
    }
  }
}

std::pair<std::size_t, double> ValueField::bracket(double t) const {
  if (!std::isfinite(t) || t < times.front() - kTimeSlack || t > times.back() + kTimeSlack) {
    std::ostringstream msg;
    msg << "time " << t << " outside stored range [" << times.front() << ", "
        << times.back() << "]";
    throw QueryError(msg.str());
  }
  if (times.size() == 1) return {0, 0.0};
  t = std::clamp(t, times.front(), times.back());
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t k = static_cast<std::size_t>(std::distance(times.begin(), it));
  k = k == 0 ? 0 : k - 1;
  if (k >= times.size() - 1) k = times.size() - 2;
  const double w = (t - times[k]) / (times[k + 1] - times[k]);
  return {k, w};
}

Sample interpolate(const GridSpec& grid, std::span<const double> slice, const StateVec& x) {
  const Cell cell = locate(grid, x);
  double v = 0.0;
  for_each_corner(grid, cell, [&](std::size_t flat, double w) { v += w * slice[flat]; });
  return {v, cell.clamped};
}

double nodal_derivative(const GridSpec& grid, std::span<const double> slice,
                        std::size_t flat, int axis) {
  const int n = grid.n()[axis];
  const std::size_t s = grid.stride(axis);
  const int k = static_cast<int>((flat / s) % static_cast<std::size_t>(n));
  const double h = grid.spacing(axis);
  if (k == 0) return (slice[flat + s] - slice[flat]) / h;
  if (k == n - 1) return (slice[flat] - slice[flat - s]) / h;
  return (slice[flat + s] - slice[flat - s]) / (2.0 * h);
}

GradientSample gradient(const GridSpec& grid, std::span<const double> slice,
                        const StateVec& x) {
  const Cell cell = locate(grid, x);
  const int d = grid.dims();
  GradientSample out{Vec::Zero(d), cell.clamped};
  for_each_corner(grid, cell, [&](std::size_t flat, double w) {
    if (w == 0.0) return;
    for (int i = 0; i < d; ++i) out.gradient[i] += w * nodal_derivative(grid, slice, flat, i);
  });
  return out;
}

Sample value_at(const ValueField& field, const StateVec& x, double t) {
  const auto [k, w] = field.bracket(t);
  const Sample a = interpolate(field.grid, field.slice(k), x);
  if (w == 0.0) return a;
  const Sample b = interpolate(field.grid, field.slice(k + 1), x);
  return {(1.0 - w) * a.value + w * b.value, a.clamped};
}

GradientSample gradient_at(const ValueField& field, const StateVec& x, double t) {
  const auto [k, w] = field.bracket(t);
  GradientSample a = gradient(field.grid, field.slice(k), x);
  if (w == 0.0) return a;
  const GradientSample b = gradient(field.grid, field.slice(k + 1), x);
  a.gradient = (1.0 - w) * a.gradient + w * b.gradient;
  return a;
}

double time_derivative(const ValueField& field, const StateVec& x, double t) {
  const auto [k, w] = field.bracket(t);
  (void)w;
  if (field.times.size() == 1) return 0.0;
  const double a = interpolate(field.grid, field.slice(k), x).value;
  const double b = interpolate(field.grid, field.slice(k + 1), x).value;
  return (b - a) / (field.times[k + 1] - field.times[k]);
}

}  // namespace cosafe
