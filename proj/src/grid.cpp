#include "hgf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hgf/errors.hpp"

namespace hgf {

GridN::GridN(int dim, const Vec& lo, const Vec& hi, Index3 cells, std::array<bool, kMaxDim> periodic)
    : dim_(dim), lo_(lo), hi_(hi), h_(dim) {
  if (dim < 1 || dim > kMaxDim) throw InvalidInput("grid dimension must be in 1..3");
  if (lo.dim() != dim || hi.dim() != dim) throw InvalidInput("grid bounds do not match dimension");
  count_ = 1;
  for (int a = 0; a < dim; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    if (!std::isfinite(lo[a]) || !std::isfinite(hi[a]) || !(hi[a] > lo[a]))
      throw InvalidInput("grid axis " + std::to_string(a) + " needs finite bounds with hi > lo");
    if (cells[ua] < kMinCells)
      throw InvalidInput("grid axis " + std::to_string(a) + " needs at least 4 cells");
    cells_[ua] = cells[ua];
    periodic_[ua] = periodic[ua];
    h_[a] = (hi[a] - lo[a]) / cells[ua];
    if (!(h_[a] > 0.0) || !std::isfinite(h_[a])) throw InvalidInput("grid spacing is degenerate");
    stride_[ua] = count_;
    count_ *= static_cast<std::size_t>(nodes(a));
  }
}

GridN GridN::line(double lo, double hi, int cells, bool periodic) {
  return GridN(1, Vec{lo}, Vec{hi}, {cells, 0, 0}, {periodic, false, false});
}

GridN GridN::box(const Vec& lo, const Vec& hi, int cells_per_axis) {
  Index3 c{};
  for (int a = 0; a < lo.dim(); ++a) c[static_cast<std::size_t>(a)] = cells_per_axis;
  return GridN(lo.dim(), lo, hi, c);
}

double GridN::min_spacing() const {
  double m = h_[0];
  for (int a = 1; a < dim_; ++a) m = std::min(m, h_[a]);
  return m;
}

std::size_t GridN::index(const Index3& ijk) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim_; ++a) idx += static_cast<std::size_t>(ijk[static_cast<std::size_t>(a)]) * stride(a);
  return idx;
}

Index3 GridN::multi_index(std::size_t node) const {
  Index3 ijk{};
  for (int a = 0; a < dim_; ++a) {
    const auto n = static_cast<std::size_t>(nodes(a));
    ijk[static_cast<std::size_t>(a)] = static_cast<int>(node % n);
    node /= n;
  }
  return ijk;
}

Vec GridN::node(std::size_t node) const {
  const Index3 ijk = multi_index(node);
  Vec x(dim_);
  for (int a = 0; a < dim_; ++a) x[a] = coord(a, ijk[static_cast<std::size_t>(a)]);
  return x;
}

std::size_t GridN::nearest_node(const Vec& x) const {
  Index3 ijk{};
  for (int a = 0; a < dim_; ++a) {
    const double s = std::round((x[a] - lo_[a]) / h_[a]);
    const double clamped = std::clamp(s, 0.0, static_cast<double>(nodes(a) - 1));
    ijk[static_cast<std::size_t>(a)] = static_cast<int>(clamped);
  }
  return index(ijk);
}

bool operator==(const GridN& a, const GridN& b) {
  return a.dim_ == b.dim_ && a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.cells_ == b.cells_ &&
         a.periodic_ == b.periodic_;
}

GradientFieldSample::GradientFieldSample(GridN g, double time, std::vector<Vec> v)
    : grid(std::move(g)), t(time), values(std::move(v)) {
  if (!std::isfinite(t) || t < 0.0) throw InvalidInput("field time must be finite and non-negative");
  if (values.size() != grid.node_count()) throw InvalidInput("field sample does not match grid node count");
  for (const Vec& x : values) {
    if (x.dim() != grid.dim()) throw InvalidInput("field vector dimension does not match grid");
    if (!x.all_finite()) throw InvalidInput("field sample contains non-finite entries");
  }
}

GraphSample::GraphSample(GridN g, double time, std::vector<double> h, std::size_t anchor)
    : grid(std::move(g)), t(time), heights(std::move(h)), anchor_node(anchor) {
  if (heights.size() != grid.node_count()) throw InvalidInput("graph sample does not match grid node count");
  if (anchor_node >= heights.size()) throw InvalidInput("anchor node outside grid");
  for (double y : heights)
    if (!std::isfinite(y)) throw InvalidInput("graph sample contains non-finite heights");
}

}  // namespace hgf
