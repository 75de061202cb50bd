#pragma once

// Graph reconstruction from evolved slope fields and flattening diagnostics.

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hgf/characteristics.hpp"
#include "hgf/entropy1d.hpp"
#include "hgf/fields.hpp"
#include "hgf/grid.hpp"
#include "hgf/potential.hpp"

namespace hgf {

/// Time-dependent slope field: whole-grid samples plus pointwise values
/// (the latter drive the gauge ODE at the anchor).
struct FlowSource {
  std::function<GradientFieldSample(double t)> field_at;
  std::function<Vec(double t, const Vec& x)> value_at;
};

/// Exact characteristic solution sampled on a fixed grid.
FlowSource characteristic_flow(const CharMap& map, GridN grid, const NewtonOptions& newton = {});

struct GaugeOptions {
  double dt_max = 0.01;
  std::optional<double> curl_tol;  ///< forwarded to line_integrate
};

/// U(t, x_anchor) under U_t + |grad U|^2 / 2 = 0, from U(t0) = u0, by
/// classical RK4 with steps no longer than dt_max.
double integrate_gauge(const std::function<Vec(double, const Vec&)>& value_at, const Vec& x_anchor, double t0,
                       double u0, double t1, double dt_max = 0.01);

/// Heights at time t: line integral of field_at(t) anchored by the gauge ODE
/// started from phi0 at the anchor node.
GraphSample evolve_potential(const PotentialFn& phi0, const FlowSource& flow, double t,
                             const GaugeOptions& options = {});

/// Snapshots of U at increasing times. The anchor series is integrated once,
/// sequentially; the line integrals are independent per snapshot.
class PotentialEvolution {
 public:
  PotentialEvolution(PotentialFn phi0, FlowSource flow, GaugeOptions options = {});

  const PotentialFn& phi0() const { return phi0_; }
  const std::vector<GraphSample>& snapshots() const { return snapshots_; }
  /// Anchor values U(t, x_anchor) matching snapshots().
  const std::vector<double>& anchor_series() const { return anchors_; }

  /// Appends snapshots for `times` (strictly increasing, after the last one).
  void advance(std::span<const double> times);

 private:
  PotentialFn phi0_;
  FlowSource flow_;
  GaugeOptions options_;
  std::vector<GraphSample> snapshots_;
  std::vector<double> anchors_;
  double last_t_ = 0.0;
  std::optional<double> last_anchor_;
  std::optional<Vec> anchor_point_;
};

/// Continuous primitive F of a 1-D state on the cell-interface grid
/// [lo, hi] (cells + 1 nodes, never periodic). F jumps by h * u_i across cell
/// i; the anchor is the interface nearest x = 0.
GraphSample reconstruct_curve(const EntropyState1D& state, double anchor_value);

struct FlatteningReport {
  std::vector<double> times;
  std::vector<double> sup_d2;  ///< n-D: sup over the tube of |D^2 U| (largest entry)
  std::vector<double> sup_d3;  ///< n-D: same for D^3 U
  std::optional<std::pair<double, double>> fitted_slopes;  ///< (D^2, D^3) against 1 + t
  std::vector<std::size_t> tube_nodes;  ///< n-D: nodes inside the tube per checkpoint
  /// n-D: rounding-error level of each finite-difference sup (machine epsilon
  /// times max |U| times the stencil's absolute weight sum). A sup below a
  /// few times this level measures rounding, not the derivative.
  std::vector<double> d2_noise, d3_noise;

  std::optional<double> straight_line_slope;  ///< 1-D: M
  double initial_deviation = 0.0;             ///< 1-D: deviation of the initial curve
  std::vector<double> deviations;             ///< 1-D: sup |F - F(anchor) - M (x - x_anchor)|
  std::optional<double> deviation_slope;
};

/// True when at least five checkpoints span a decade of 1 + t.
bool fit_window_ok(std::span<const double> times);

struct FlatteningOptions {
  int cells = 64;         ///< per axis across the image of the tube
  int tube_samples = 33;  ///< per axis on the base box
  NewtonOptions newton;
  GaugeOptions gauge;
};

/// Convex n-D case: the tube is the forward image of the fixed base box
/// [base_lo, base_hi]. Derivatives are finite differences of reconstructed
/// heights on a padded grid covering the image.
FlatteningReport flattening_report(const CharMap& map, const Vec& base_lo, const Vec& base_hi,
                                   std::span<const double> checkpoints, const FlatteningOptions& options = {});

/// Curve deviation from the line of slope M for one state.
double straight_line_deviation(const EntropyState1D& state, double mean_slope);

/// 1-D case: runs the entropy solver and measures the curve deviation at each
/// checkpoint. M is the periodic mean, or 0 in outflow mode.
FlatteningReport flattening_report_1d(const EntropyState1D& initial, std::span<const double> checkpoints,
                                      const SolverOptions& solver = {});

}  // namespace hgf
