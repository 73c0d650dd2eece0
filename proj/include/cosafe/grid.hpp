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

#ifndef COSAFE_GRID_HPP
#define COSAFE_GRID_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cosafe/types.hpp"

namespace cosafe {

/// Node-centred uniform Cartesian grid. Both endpoints of every axis are
/// nodes, so node k on axis i sits at lo[i] + k * spacing(i).
///
/// Flattening is row-major with axis 0 slowest: for a 2D grid the flat index
/// of node (i0, i1) is i0 * n[1] + i1.
class GridSpec {
 public:
  GridSpec() = default;
  /// Throws ConfigError unless every axis has hi > lo and n >= 2.
  GridSpec(std::vector<double> lo, std::vector<double> hi, std::vector<int> n);

  int dims() const { return static_cast<int>(n_.size()); }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  const std::vector<int>& n() const { return n_; }

  double spacing(int axis) const {
    return (hi_[axis] - lo_[axis]) / static_cast<double>(n_[axis] - 1);
  }
  double max_spacing() const;
  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t stride(int axis) const { return strides_[axis]; }

  double coordinate(int axis, int k) const { return lo_[axis] + k * spacing(axis); }
  /// Per-axis integer index of a flat node index.
  std::vector<int> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const int> idx) const;
  StateVec node(std::size_t flat) const;

  /// Grid covering [lo - pad*h, hi + pad*h] with n nodes spanning [lo, hi]
  /// and pad extra cells on each side.
  static GridSpec padded(const std::vector<double>& lo, const std::vector<double>& hi,
                         const std::vector<int>& n, int pad_cells);

  bool operator==(const GridSpec& other) const {
    return lo_ == other.lo_ && hi_ == other.hi_ && n_ == other.n_;
  }

 private:
  std::vector<double> lo_, hi_;
  std::vector<int> n_;
  std::vector<std::size_t> strides_;
  std::size_t num_nodes_ = 0;
};

struct FieldMetadata {
  std::string kind;         // "safety", "performance", "oracle-..." or empty
  std::string config_hash;  // hash of the config that produced the field
  /// Flat node indices whose values carry no meaning (e.g. outside the safe
  /// set for the performance value function).
  std::vector<std::size_t> unreliable_nodes;
};

/// Time-stamped scalar fields on a grid. slices[k] holds the node values at
/// times[k]; times are strictly increasing.
struct ValueField {
  GridSpec grid;
  std::vector<double> times;
  std::vector<std::vector<double>> slices;
  FieldMetadata meta;

  /// Throws ConfigError on size mismatch, non-increasing times or non-finite
  /// values.
  void validate() const;

  std::span<const double> slice(std::size_t k) const { return slices[k]; }
  const std::vector<double>& initial() const { return slices.front(); }
  const std::vector<double>& terminal() const { return slices.back(); }

  /// Index k of the stored interval [times[k], times[k+1]] containing t and
  /// the linear weight of slice k+1. Throws QueryError when t is outside the
  /// stored range (1e-9 slack). For a single-slice field returns {0, 0}.
  std::pair<std::size_t, double> bracket(double t) const;
};

struct Sample {
  double value = 0.0;
  bool clamped = false;
};

struct GradientSample {
  Vec gradient;
  bool clamped = false;
};

/// Multilinear interpolation of a slice. Points outside the grid are clamped
/// to the boundary and flagged; non-finite points throw QueryError.
Sample interpolate(const GridSpec& grid, std::span<const double> slice, const StateVec& x);

/// Nodal finite difference along one axis: central in the interior,
/// one-sided on the boundary.
double nodal_derivative(const GridSpec& grid, std::span<const double> slice,
                        std::size_t flat, int axis);

/// Spatial gradient: nodal finite differences interpolated multilinearly.
GradientSample gradient(const GridSpec& grid, std::span<const double> slice,
                        const StateVec& x);

/// Value at (x, t), linear in time between bracketing slices.
Sample value_at(const ValueField& field, const StateVec& x, double t);

/// Spatial gradient at (x, t), linear in time between bracketing slices.
GradientSample gradient_at(const ValueField& field, const StateVec& x, double t);

/// Difference quotient of the two slices bracketing t, each evaluated at x.
/// At a stored stamp the forward interval is used, except at the last stamp.
double time_derivative(const ValueField& field, const StateVec& x, double t);

/// Samples fn at every grid node.
template <typename Fn>
std::vector<double> sample_nodes(const GridSpec& grid, Fn&& fn) {
  std::vector<double> out(grid.num_nodes());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(grid.node(i));
  return out;
}

}  // namespace cosafe

#endif  // COSAFE_GRID_HPP
