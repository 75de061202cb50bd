#include "hgf/fields.hpp"

#include <algorithm>
#include <cmath>

#include "hgf/errors.hpp"

namespace hgf {
namespace {

// Walks a single grid line: node(k) for k in [0, count) along `axis`
// through `base` (whose own index on that axis is ignored).
struct GridLine {
  std::size_t base;
  std::size_t stride;
  int count;
  double h;
  bool periodic;

  std::size_t node(int k) const {
    if (periodic) k = ((k % count) + count) % count;
    return base + static_cast<std::size_t>(k) * stride;
  }
};

GridLine line_through(const GridN& grid, std::size_t node, int axis) {
  const Index3 ijk = grid.multi_index(node);
  const std::size_t base = node - static_cast<std::size_t>(ijk[static_cast<std::size_t>(axis)]) * grid.stride(axis);
  return {base, grid.stride(axis), grid.nodes(axis), grid.spacing(axis), grid.periodic(axis)};
}

template <class Get>
double axis_derivative(const GridLine& ln, int i, Get get) {
  const double h = ln.h;
  if (ln.periodic || (i > 0 && i < ln.count - 1))
    return (get(ln.node(i + 1)) - get(ln.node(i - 1))) / (2.0 * h);
  if (i == 0) return (-3.0 * get(ln.node(0)) + 4.0 * get(ln.node(1)) - get(ln.node(2))) / (2.0 * h);
  const int m = ln.count - 1;
  return (3.0 * get(ln.node(m)) - 4.0 * get(ln.node(m - 1)) + get(ln.node(m - 2))) / (2.0 * h);
}

// Integral of the cubic interpolant over [k, k+1] along a line.
template <class Get>
double interval_integral(const GridLine& ln, int k, Get get) {
  const double h = ln.h;
  auto f = [&](int j) { return get(ln.node(j)); };
  if (ln.periodic || (k >= 1 && k + 2 <= ln.count - 1))
    return h / 24.0 * (-f(k - 1) + 13.0 * f(k) + 13.0 * f(k + 1) - f(k + 2));
  if (k == 0) return h / 24.0 * (9.0 * f(0) + 19.0 * f(1) - 5.0 * f(2) + f(3));
  return h / 24.0 * (f(k - 2) - 5.0 * f(k - 1) + 19.0 * f(k) + 9.0 * f(k + 1));
}

template <class Get>
void integrate_line(const GridLine& ln, int start, std::vector<double>& out, Get get) {
  double acc = out[ln.node(start)];
  for (int k = start; k + 1 < ln.count; ++k) {
    acc += interval_integral(ln, k, get);
    out[ln.node(k + 1)] = acc;
  }
  acc = out[ln.node(start)];
  for (int k = start - 1; k >= 0; --k) {
    acc -= interval_integral(ln, k, get);
    out[ln.node(k)] = acc;
  }
}

}  // namespace

GradientFieldSample fd_gradient(const GraphSample& graph) {
  const GridN& g = graph.grid;
  for (double y : graph.heights)
    if (!std::isfinite(y)) throw InvalidInput("fd_gradient: non-finite height");
  std::vector<Vec> values(g.node_count(), Vec(g.dim()));
  auto height = [&](std::size_t p) { return graph.heights[p]; };
  for (std::size_t p = 0; p < g.node_count(); ++p) {
    const Index3 ijk = g.multi_index(p);
    for (int a = 0; a < g.dim(); ++a)
      values[p][a] = axis_derivative(line_through(g, p, a), ijk[static_cast<std::size_t>(a)], height);
  }
  return GradientFieldSample(g, graph.t, std::move(values));
}

std::vector<Mat> fd_jacobian(const GradientFieldSample& field) {
  const GridN& g = field.grid;
  const int n = g.dim();
  std::vector<Mat> jac(g.node_count(), Mat(n));
  for (std::size_t p = 0; p < g.node_count(); ++p) {
    const Index3 ijk = g.multi_index(p);
    for (int j = 0; j < n; ++j) {
      const GridLine ln = line_through(g, p, j);
      for (int i = 0; i < n; ++i) {
        auto comp = [&](std::size_t q) { return field.values[q][i]; };
        jac[p](i, j) = axis_derivative(ln, ijk[static_cast<std::size_t>(j)], comp);
      }
    }
  }
  return jac;
}

double mean_value(const GradientFieldSample& field, MeanMode mode, double edge_tol) {
  const GridN& g = field.grid;
  if (g.dim() != 1) throw ContractViolation("mean_value needs a 1-D field");
  const std::size_t m = field.values.size();
  if (mode == MeanMode::Periodic) {
    if (!g.periodic(0)) throw ContractViolation("periodic mean needs a periodic grid");
    // Rectangle rule on the period cell; spectrally accurate for smooth periodic data.
    double sum = 0.0;
    for (const Vec& v : field.values) sum += v[0];
    return sum / static_cast<double>(m);
  }
  double sup = 0.0, l1 = 0.0;
  for (const Vec& v : field.values) {
    sup = std::max(sup, std::abs(v[0]));
    l1 += std::abs(v[0]) * g.spacing(0);
  }
  if (!std::isfinite(l1)) throw DomainTooSmall("slope field is not integrable on the truncated domain");
  const double edge = std::max(std::abs(field.values.front()[0]), std::abs(field.values.back()[0]));
  if (edge > edge_tol * std::max(sup, 1e-300) && edge > 0.0)
    throw DomainTooSmall("slope field has not decayed at the domain edge (|v| = " + std::to_string(edge) + ")");
  return 0.0;
}

CurlResidual curl_residual(const GradientFieldSample& field) {
  const GridN& g = field.grid;
  const int n = g.dim();
  CurlResidual r;
  for (std::size_t p = 0; p < g.node_count(); ++p) {
    const Index3 ijk = g.multi_index(p);
    for (int a = 0; a < n; ++a) {
      const auto ia = ijk[static_cast<std::size_t>(a)];
      if (!g.periodic(a) && ia + 1 >= g.nodes(a)) continue;
      const std::size_t q = line_through(g, p, a).node(ia + 1);
      for (int i = 0; i < n; ++i)
        r.difference_scale = std::max(r.difference_scale, std::abs(field.values[q][i] - field.values[p][i]) / g.spacing(a));
    }
  }
  if (n == 1) return r;
  const std::vector<Mat> jac = fd_jacobian(field);
  for (std::size_t p = 0; p < jac.size(); ++p)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double w = std::abs(jac[p](i, j) - jac[p](j, i));
        if (w > r.max_abs) {
          r.max_abs = w;
          r.node = p;
        }
      }
  return r;
}

double default_curl_tol(const CurlResidual& residual, double factor) { return factor * residual.difference_scale; }

std::size_t origin_anchor(const GridN& grid) { return grid.nearest_node(Vec::filled(grid.dim(), 0.0)); }

GraphSample line_integrate(const GradientFieldSample& field, double anchor_value, const LineIntegrateOptions& options) {
  const GridN& g = field.grid;
  const int n = g.dim();
  const std::size_t anchor = options.anchor_node.value_or(origin_anchor(g));
  if (anchor >= g.node_count()) throw InvalidInput("anchor node outside grid");
  if (!std::isfinite(anchor_value)) throw InvalidInput("anchor value must be finite");

  if (n >= 2) {
    const CurlResidual res = curl_residual(field);
    const double tol = options.curl_tol.value_or(default_curl_tol(res));
    if (res.max_abs > tol) throw NonIntegrableField(res.max_abs, tol, res.node);
  }

  std::vector<double> heights(g.node_count(), 0.0);
  heights[anchor] = anchor_value;
  const Index3 a = g.multi_index(anchor);

  // Axis 0 through the anchor, then axis 1 from every node of that line,
  // then axis 2 from every node of the resulting plane.
  integrate_line(line_through(g, anchor, 0), a[0], heights, [&](std::size_t q) { return field.values[q][0]; });
  if (n >= 2) {
    for (int i0 = 0; i0 < g.nodes(0); ++i0) {
      const std::size_t start = g.index({i0, a[1], a[2]});
      integrate_line(line_through(g, start, 1), a[1], heights, [&](std::size_t q) { return field.values[q][1]; });
    }
  }
  if (n == 3) {
    for (int i1 = 0; i1 < g.nodes(1); ++i1)
      for (int i0 = 0; i0 < g.nodes(0); ++i0) {
        const std::size_t start = g.index({i0, i1, a[2]});
        integrate_line(line_through(g, start, 2), a[2], heights, [&](std::size_t q) { return field.values[q][2]; });
      }
  }
  return GraphSample(g, field.t, std::move(heights), anchor);
}

}  // namespace hgf
