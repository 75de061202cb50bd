#pragma once

// Finite-volume solver for the plane-curve case v_t + (v^2/2)_x = 0.

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hgf/grid.hpp"
#include "hgf/potential.hpp"

namespace hgf {

enum class Boundary { Periodic, Outflow };

/// Cell averages of the slope on a 1-D grid. Cell i covers
/// [lo + i h, lo + (i + 1) h]; the grid is periodic iff the boundary is.
class EntropyState1D {
 public:
  EntropyState1D(GridN grid, double t, std::vector<double> cell_avgs, Boundary boundary);

  /// Exact averages (Phi(b) - Phi(a)) / h of the slope grad Phi.
  static EntropyState1D from_potential(const PotentialFn& phi, const GridN& grid, Boundary boundary);

  /// Same grid, boundary and recorded initial mass at a later time.
  EntropyState1D evolved(double t, std::vector<double> cell_avgs) const;

  const GridN& grid() const { return grid_; }
  double t() const { return t_; }
  Boundary boundary() const { return boundary_; }
  std::span<const double> cell_avgs() const { return avgs_; }
  std::size_t size() const { return avgs_.size(); }
  double cell_width() const { return grid_.spacing(0); }
  double cell_center(std::size_t i) const { return grid_.lo(0) + (static_cast<double>(i) + 0.5) * cell_width(); }

  double mass() const;
  double initial_mass() const { return initial_mass_; }
  double total_variation() const;
  double min_value() const;
  double max_value() const;

  /// Cell averages as a field sampled at the cell centres.
  GradientFieldSample as_field() const;

 private:
  GridN grid_;
  double t_;
  std::vector<double> avgs_;
  Boundary boundary_;
  double initial_mass_ = 0.0;
};

double total_variation(std::span<const double> u, bool periodic);

/// Exact Riemann-problem flux for f(v) = v^2 / 2.
double godunov_flux(double v_left, double v_right);

struct SolverOptions {
  double cfl = 0.9;
  double floor_speed = 1e-8;
};

using StepObserver = std::function<void(double t, std::span<const double> cell_avgs)>;

/// In-place first-order Godunov integrator with preallocated flux storage.
class GodunovSolver {
 public:
  GodunovSolver(const EntropyState1D& initial, const SolverOptions& options = {});

  double time() const { return t_; }
  std::span<const double> values() const { return u_; }
  std::size_t steps_taken() const { return steps_; }

  /// One explicit update with dt = cfl h / max(|v|, floor_speed), shortened to
  /// `max_dt`. Returns the dt used.
  double step(double max_dt = std::numeric_limits<double>::infinity());

  /// Steps until time() == t_end exactly; observer runs after every step.
  void advance_to(double t_end, const StepObserver& observer = {});

  EntropyState1D state() const;

  /// Time integral of the flux through the interface nearest x = 0. The
  /// primitive F of the slope obeys F_t = -flux there, so this carries the
  /// curve gauge.
  double anchor_flux_integral() const { return anchor_flux_integral_; }
  std::size_t anchor_interface() const { return anchor_interface_; }

 private:
  EntropyState1D initial_;
  SolverOptions options_;
  std::vector<double> u_;
  std::vector<double> flux_;
  double t_;
  std::size_t steps_ = 0;
  std::size_t anchor_interface_ = 0;
  double anchor_flux_integral_ = 0.0;
};

/// Pure single step: old state -> new state.
EntropyState1D step(const EntropyState1D& state, double cfl);

EntropyState1D advance(const EntropyState1D& state, double t_end, double cfl = 0.9,
                       const StepObserver& observer = {});

struct LaxOleinikResult {
  double value = 0.0;      ///< (x - y*) / t
  double minimizer = 0.0;  ///< y*
  bool shock_point = false;  ///< several global minimizers tied within tie_tol
};

/// Variational solution at (t, x): minimise Phi(y) + (x - y)^2 / (2 t) by a
/// brute-force scan of `search_grid` candidates in [x - R, x + R], then
/// golden-section and Newton refinement. R defaults to 1.05 t sup|grad Phi|
/// from `phi.slope_bound`. At ties the leftmost minimiser (left trace) is
/// returned.
LaxOleinikResult lax_oleinik(const PotentialFn& phi, double t, double x, int search_grid,
                             std::optional<double> search_radius = std::nullopt, double tie_tol = 1e-9);

struct ShockRecord {
  double detection_time = 0.0;
  double location = 0.0;
  double jump = 0.0;  ///< left minus right trace, > 0 for admissible shocks
  std::vector<std::pair<double, double>> history;  ///< (t, location)
};

struct ShockOptions {
  double jump_tol = 0.2;  ///< fraction of the total variation
  int cluster_width = 3;  ///< cells
};

std::vector<ShockRecord> detect_shocks(const EntropyState1D& state, const ShockOptions& options = {});

std::vector<ShockRecord> detect_shocks(std::span<const double> cell_avgs, const GridN& grid, Boundary boundary,
                                       double t, const ShockOptions& options = {});

/// Links detections over time by nearest location (periodic distance on
/// periodic grids). A track ends the first time it is not matched.
class ShockTracker {
 public:
  explicit ShockTracker(double match_radius_cells = 4.0) : radius_cells_(match_radius_cells) {}

  void observe(const std::vector<ShockRecord>& detections, const GridN& grid);

  const std::vector<ShockRecord>& records() const { return records_; }
  std::optional<double> first_detection_time() const;

 private:
  double radius_cells_;
  std::vector<ShockRecord> records_;
  std::vector<std::size_t> active_;
};

struct FlowTraceRow {
  double t = 0.0;
  double sup_dev = 0.0;  ///< sup |v - M|
  double mean = 0.0;
  double tv = 0.0;
  int n_shocks = 0;
  std::optional<double> shock_loc_1;
};

struct FlowTrace {
  double mean_value = 0.0;  ///< M
  std::vector<FlowTraceRow> rows;
  std::vector<ShockRecord> shocks;
  std::optional<double> first_shock_time;
  std::optional<double> fitted_slope;  ///< d log sup_dev / d log(1 + t), second half of checkpoints
  std::size_t steps = 0;
};

struct DecayOptions {
  SolverOptions solver;
  ShockOptions shocks;
  bool track_shocks = true;
  StepObserver observer;
  /// Called at each checkpoint with the state and the anchor flux integral.
  std::function<void(const EntropyState1D&, double)> on_checkpoint;
};

/// Runs the solver to `horizon`, recording sup |v - M|, mean and TV at each
/// checkpoint. M is the periodic mean, or 0 for outflow (L1) data.
FlowTrace decay_profile(const EntropyState1D& initial, double horizon, std::span<const double> checkpoints,
                        const DecayOptions& options = {});

}  // namespace hgf
