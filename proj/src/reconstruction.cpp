#include "hgf/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hgf/errors.hpp"
#include "hgf/fit.hpp"
#include "hgf/parallel.hpp"

namespace hgf {

FlowSource characteristic_flow(const CharMap& map, GridN grid, const NewtonOptions& newton) {
  FlowSource src;
  src.field_at = [map, grid = std::move(grid), newton](double t) {
    return sample_field(map.at_time(t), grid, newton);
  };
  src.value_at = [map, newton](double t, const Vec& x) { return evaluate_solution(map.at_time(t), x, newton); };
  return src;
}

double integrate_gauge(const std::function<Vec(double, const Vec&)>& value_at, const Vec& x_anchor, double t0,
                       double u0, double t1, double dt_max) {
  if (!(dt_max > 0.0 && dt_max <= 0.01)) throw ContractViolation("gauge step must lie in (0, 0.01]");
  if (t1 < t0) throw ContractViolation("gauge integration runs forward in time");
  if (t1 == t0) return u0;
  // The right-hand side does not depend on U, so the RK4 stages reduce to
  // Simpson's rule on each step.
  auto rhs = [&](double t) { return -0.5 * value_at(t, x_anchor).norm_sq(); };
  const auto steps = static_cast<long>(std::ceil((t1 - t0) / dt_max - 1e-12));
  const double dt = (t1 - t0) / static_cast<double>(steps);
  double u = u0;
  double k1 = rhs(t0);
  for (long s = 0; s < steps; ++s) {
    const double ts = t0 + static_cast<double>(s) * dt;
    const double k2 = rhs(ts + 0.5 * dt);
    const double k4 = rhs(s + 1 == steps ? t1 : ts + dt);
    u += dt / 6.0 * (k1 + 4.0 * k2 + k4);
    k1 = k4;
  }
  return u;
}

GraphSample evolve_potential(const PotentialFn& phi0, const FlowSource& flow, double t, const GaugeOptions& options) {
  PotentialEvolution evo(phi0, flow, options);
  const double times[] = {t};
  evo.advance(times);
  return evo.snapshots().back();
}

PotentialEvolution::PotentialEvolution(PotentialFn phi0, FlowSource flow, GaugeOptions options)
    : phi0_(std::move(phi0)), flow_(std::move(flow)), options_(options) {
  if (!flow_.field_at || !flow_.value_at) throw InvalidInput("flow source needs both field and pointwise rules");
}

void PotentialEvolution::advance(std::span<const double> times) {
  for (double t : times) {
    if (!std::isfinite(t) || t < 0.0) throw ContractViolation("snapshot times must be finite and >= 0");
    if (last_anchor_ && !(t > last_t_)) throw ContractViolation("snapshot times must be strictly increasing");
    GradientFieldSample field = flow_.field_at(t);
    const std::size_t anchor = origin_anchor(field.grid);
    const Vec x_anchor = field.grid.node(anchor);
    if (!anchor_point_) {
      anchor_point_ = x_anchor;
      last_t_ = 0.0;
      last_anchor_ = phi0_.value(x_anchor);
    } else if (!(*anchor_point_ == x_anchor)) {
      throw ContractViolation("flow grid changed its anchor node between snapshots");
    }
    const double u = integrate_gauge(flow_.value_at, x_anchor, last_t_, *last_anchor_, t, options_.dt_max);
    last_t_ = t;
    last_anchor_ = u;
    LineIntegrateOptions lopt;
    lopt.anchor_node = anchor;
    lopt.curl_tol = options_.curl_tol;
    snapshots_.push_back(line_integrate(field, u, lopt));
    anchors_.push_back(u);
  }
}

GraphSample reconstruct_curve(const EntropyState1D& state, double anchor_value) {
  const GridN& cells = state.grid();
  const int n = static_cast<int>(state.size());
  GridN nodes = GridN::line(cells.lo(0), cells.hi(0), n, false);
  const std::size_t anchor = origin_anchor(nodes);
  const auto u = state.cell_avgs();
  const double h = state.cell_width();
  std::vector<double> f(static_cast<std::size_t>(n) + 1);
  f[anchor] = anchor_value;
  for (std::size_t j = anchor; j < static_cast<std::size_t>(n); ++j) f[j + 1] = f[j] + h * u[j];
  for (std::size_t j = anchor; j > 0; --j) f[j - 1] = f[j] - h * u[j - 1];
  return GraphSample(std::move(nodes), state.t(), std::move(f), anchor);
}

bool fit_window_ok(std::span<const double> times) {
  if (times.size() < 5) return false;
  return 1.0 + times.back() >= 10.0 * (1.0 + times.front());
}

namespace {

// Central-difference stencil for d^order / dx^order on one axis, as
// (offset, weight) pairs.
std::vector<std::pair<int, double>> axis_stencil(int order, double h) {
  switch (order) {
    case 0:
      return {{0, 1.0}};
    case 1:
      return {{-1, -0.5 / h}, {1, 0.5 / h}};
    case 2:
      return {{-1, 1.0 / (h * h)}, {0, -2.0 / (h * h)}, {1, 1.0 / (h * h)}};
    default: {
      const double c = 0.5 / (h * h * h);
      return {{-2, -c}, {-1, 2.0 * c}, {1, -2.0 * c}, {2, c}};
    }
  }
}

// All per-axis derivative orders summing to `total` in `dim` axes.
void order_vectors(int dim, int total, Index3 current, int axis, std::vector<Index3>& out) {
  if (axis == dim - 1) {
    current[static_cast<std::size_t>(axis)] = total;
    out.push_back(current);
    return;
  }
  for (int k = 0; k <= total; ++k) {
    current[static_cast<std::size_t>(axis)] = k;
    order_vectors(dim, total - k, current, axis + 1, out);
  }
}

struct Stencil {
  std::vector<std::pair<Index3, double>> taps;
};

Stencil tensor_stencil(const GridN& g, const Index3& orders) {
  Stencil s;
  s.taps.push_back({Index3{}, 1.0});
  for (int a = 0; a < g.dim(); ++a) {
    const auto axis = axis_stencil(orders[static_cast<std::size_t>(a)], g.spacing(a));
    std::vector<std::pair<Index3, double>> next;
    for (const auto& [off, w] : s.taps)
      for (const auto& [d, wa] : axis) {
        Index3 o = off;
        o[static_cast<std::size_t>(a)] += d;
        next.push_back({o, w * wa});
      }
    s.taps = std::move(next);
  }
  return s;
}

struct SupEstimate {
  double sup = 0.0;
  double noise = 0.0;
};

// Largest |derivative entry| of order `total` over the listed nodes.
SupEstimate sup_derivative(const GraphSample& u, const std::vector<std::size_t>& nodes, int total) {
  const GridN& g = u.grid;
  std::vector<Index3> orders;
  order_vectors(g.dim(), total, Index3{}, 0, orders);
  std::vector<Stencil> stencils;
  double weight = 0.0;
  for (const auto& o : orders) {
    stencils.push_back(tensor_stencil(g, o));
    double w = 0.0;
    for (const auto& tap : stencils.back().taps) w += std::abs(tap.second);
    weight = std::max(weight, w);
  }
  double umax = 0.0;
  for (double h : u.heights) umax = std::max(umax, std::abs(h));
  SupEstimate est;
  est.noise = std::numeric_limits<double>::epsilon() * umax * weight;
  double sup = 0.0;
  for (std::size_t p : nodes) {
    const Index3 base = g.multi_index(p);
    for (const auto& s : stencils) {
      double d = 0.0;
      for (const auto& [off, w] : s.taps) {
        Index3 q = base;
        for (int a = 0; a < g.dim(); ++a) q[static_cast<std::size_t>(a)] += off[static_cast<std::size_t>(a)];
        d += w * u.heights[g.index(q)];
      }
      sup = std::max(sup, std::abs(d));
    }
  }
  est.sup = sup;
  return est;
}

}  // namespace

FlatteningReport flattening_report(const CharMap& map, const Vec& base_lo, const Vec& base_hi,
                                   std::span<const double> checkpoints, const FlatteningOptions& options) {
  if (checkpoints.size() < 5) throw ContractViolation("flattening_report needs at least 5 checkpoints");
  for (std::size_t k = 1; k < checkpoints.size(); ++k)
    if (!(checkpoints[k] > checkpoints[k - 1])) throw ContractViolation("checkpoints must be increasing");
  if (options.cells < 8) throw ContractViolation("flattening grid needs at least 8 cells per axis");
  const int n = map.phi().dim();
  constexpr int pad = 3;  // stencil reach of D^3 plus one

  FlatteningReport rep;
  for (double t : checkpoints) {
    const CharMap mt = map.at_time(t);
    const CharacteristicTube tube = characteristic_tube(mt, base_lo, base_hi, options.tube_samples);
    auto [lo, hi] = tube.image_bounds();
    Vec glo(n), ghi(n);
    Index3 cells{};
    for (int a = 0; a < n; ++a) {
      const double h = (hi[a] - lo[a]) / options.cells;
      glo[a] = lo[a] - pad * h;
      ghi[a] = hi[a] + pad * h;
      cells[static_cast<std::size_t>(a)] = options.cells + 2 * pad;
    }
    const GridN grid(n, glo, ghi, cells);

    const std::vector<Vec> alphas = sample_preimages(mt, grid, options.newton);
    std::vector<Vec> slopes(alphas.size(), Vec(n));
    parallel_for(alphas.size(), [&](std::size_t p) { slopes[p] = map.phi().gradient(alphas[p]); });
    GradientFieldSample field(grid, t, std::move(slopes));

    FlowSource src;
    src.field_at = [&](double) { return field; };
    src.value_at = [&](double s, const Vec& x) { return evaluate_solution(map.at_time(s), x, options.newton); };
    const GraphSample u = evolve_potential(map.phi(), src, t, options.gauge);

    std::vector<std::size_t> inside;
    for (std::size_t p = 0; p < grid.node_count(); ++p) {
      const Index3 ijk = grid.multi_index(p);
      bool interior = true;
      for (int a = 0; a < n; ++a) {
        const int i = ijk[static_cast<std::size_t>(a)];
        interior = interior && i >= 2 && i <= grid.nodes(a) - 3;
      }
      if (interior && tube.base_contains(alphas[p])) inside.push_back(p);
    }
    if (inside.empty()) throw DomainTooSmall("no grid node falls inside the characteristic tube");
    rep.times.push_back(t);
    rep.tube_nodes.push_back(inside.size());
    const SupEstimate d2 = sup_derivative(u, inside, 2);
    const SupEstimate d3 = sup_derivative(u, inside, 3);
    rep.sup_d2.push_back(d2.sup);
    rep.sup_d3.push_back(d3.sup);
    rep.d2_noise.push_back(d2.noise);
    rep.d3_noise.push_back(d3.noise);
  }
  if (fit_window_ok(rep.times)) {
    const auto s2 = loglog_slope(rep.times, rep.sup_d2);
    const auto s3 = loglog_slope(rep.times, rep.sup_d3);
    if (s2 && s3) rep.fitted_slopes = std::pair{*s2, *s3};
  }
  return rep;
}

double straight_line_deviation(const EntropyState1D& state, double mean_slope) {
  const GraphSample f = reconstruct_curve(state, 0.0);
  const double xa = f.grid.coord(0, static_cast<int>(f.anchor_node));
  double dev = 0.0;
  for (std::size_t j = 0; j < f.heights.size(); ++j) {
    const double x = f.grid.coord(0, static_cast<int>(j));
    dev = std::max(dev, std::abs(f.heights[j] - f.anchor_value() - mean_slope * (x - xa)));
  }
  return dev;
}

FlatteningReport flattening_report_1d(const EntropyState1D& initial, std::span<const double> checkpoints,
                                      const SolverOptions& solver) {
  if (checkpoints.size() < 5) throw ContractViolation("flattening_report needs at least 5 checkpoints");
  for (std::size_t k = 1; k < checkpoints.size(); ++k)
    if (!(checkpoints[k] > checkpoints[k - 1])) throw ContractViolation("checkpoints must be increasing");
  const double length = initial.grid().hi(0) - initial.grid().lo(0);
  const double m = initial.boundary() == Boundary::Periodic ? initial.initial_mass() / length : 0.0;

  FlatteningReport rep;
  rep.straight_line_slope = m;
  rep.initial_deviation = straight_line_deviation(initial, m);
  GodunovSolver run(initial, solver);
  for (double t : checkpoints) {
    run.advance_to(t);
    rep.times.push_back(t);
    rep.deviations.push_back(straight_line_deviation(run.state(), m));
  }
  if (fit_window_ok(rep.times)) rep.deviation_slope = loglog_slope(rep.times, rep.deviations);
  return rep;
}

}  // namespace hgf
