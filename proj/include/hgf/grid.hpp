#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "hgf/linalg.hpp"

namespace hgf {

using Index3 = std::array<int, kMaxDim>;

/// Uniform tensor-product grid over a box in R^n (n <= 3).
///
/// A non-periodic axis with `cells` cells carries `cells + 1` nodes including
/// both end points. A periodic axis carries `cells` nodes; `hi` is identified
/// with `lo` and is not stored. Node storage is axis-0 fastest.
class GridN {
 public:
  static constexpr int kMinCells = 4;

  GridN(int dim, const Vec& lo, const Vec& hi, Index3 cells, std::array<bool, kMaxDim> periodic = {});

  static GridN line(double lo, double hi, int cells, bool periodic = false);
  static GridN box(const Vec& lo, const Vec& hi, int cells_per_axis);

  int dim() const { return dim_; }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  int cells(int axis) const { return cells_[static_cast<std::size_t>(axis)]; }
  bool periodic(int axis) const { return periodic_[static_cast<std::size_t>(axis)]; }
  double spacing(int axis) const { return h_[axis]; }
  double min_spacing() const;

  int nodes(int axis) const { return periodic(axis) ? cells(axis) : cells(axis) + 1; }
  std::size_t node_count() const { return count_; }
  std::size_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }

  std::size_t index(const Index3& ijk) const;
  Index3 multi_index(std::size_t node) const;
  double coord(int axis, int i) const { return lo_[axis] + i * h_[axis]; }
  Vec node(std::size_t node) const;

  /// Node closest to `x` (per-axis rounding, clamped to the grid).
  std::size_t nearest_node(const Vec& x) const;

  friend bool operator==(const GridN& a, const GridN& b);

 private:
  int dim_;
  Vec lo_, hi_, h_;
  Index3 cells_{};
  std::array<bool, kMaxDim> periodic_{};
  std::array<std::size_t, kMaxDim> stride_{};
  std::size_t count_ = 0;
};

/// Slope field v(t, .) sampled at every node of a grid.
struct GradientFieldSample {
  GradientFieldSample(GridN grid, double t, std::vector<Vec> values);

  GridN grid;
  double t;
  std::vector<Vec> values;
};

/// Graph heights f(t, .) sampled at every node of a grid.
struct GraphSample {
  GraphSample(GridN grid, double t, std::vector<double> heights, std::size_t anchor_node);

  double anchor_value() const { return heights[anchor_node]; }

  GridN grid;
  double t;
  std::vector<double> heights;
  std::size_t anchor_node;
};

}  // namespace hgf
