#include "hgf/entropy1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hgf/errors.hpp"
#include "hgf/fields.hpp"
#include "hgf/fit.hpp"

namespace hgf {

namespace {

void check_grid(const GridN& grid, Boundary boundary) {
  if (grid.dim() != 1) throw InvalidInput("entropy state needs a 1-D grid");
  if (grid.periodic(0) != (boundary == Boundary::Periodic))
    throw InvalidInput("grid periodicity must match the boundary mode");
}

double domain_length(const GridN& grid) { return grid.hi(0) - grid.lo(0); }

}  // namespace

EntropyState1D::EntropyState1D(GridN grid, double t, std::vector<double> cell_avgs, Boundary boundary)
    : grid_(std::move(grid)), t_(t), avgs_(std::move(cell_avgs)), boundary_(boundary) {
  check_grid(grid_, boundary_);
  if (avgs_.empty()) throw InvalidInput("entropy state has no cells");
  if (avgs_.size() != static_cast<std::size_t>(grid_.cells(0)))
    throw InvalidInput("cell average count " + std::to_string(avgs_.size()) + " does not match " +
                       std::to_string(grid_.cells(0)) + " cells");
  if (!std::isfinite(t_) || t_ < 0.0) throw InvalidInput("entropy state time must be finite and >= 0");
  for (std::size_t i = 0; i < avgs_.size(); ++i)
    if (!std::isfinite(avgs_[i])) throw InvalidInput("non-finite cell average at cell " + std::to_string(i));
  initial_mass_ = mass();
}

EntropyState1D EntropyState1D::from_potential(const PotentialFn& phi, const GridN& grid, Boundary boundary) {
  check_grid(grid, boundary);
  if (phi.dim() != 1) throw InvalidInput("1-D entropy state needs a 1-D potential");
  const int n = grid.cells(0);
  const double h = grid.spacing(0);
  std::vector<double> avgs(static_cast<std::size_t>(n));
  double left = phi.value(Vec{grid.lo(0)});
  for (int i = 0; i < n; ++i) {
    const double right = phi.value(Vec{grid.coord(0, i + 1)});
    avgs[static_cast<std::size_t>(i)] = (right - left) / h;
    left = right;
  }
  return EntropyState1D(grid, 0.0, std::move(avgs), boundary);
}

EntropyState1D EntropyState1D::evolved(double t, std::vector<double> cell_avgs) const {
  EntropyState1D next(grid_, t, std::move(cell_avgs), boundary_);
  next.initial_mass_ = initial_mass_;
  return next;
}

double EntropyState1D::mass() const {
  double s = 0.0;
  for (double u : avgs_) s += u;
  return s * cell_width();
}

double total_variation(std::span<const double> u, bool periodic) {
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) tv += std::abs(u[i + 1] - u[i]);
  if (periodic && !u.empty()) tv += std::abs(u.front() - u.back());
  return tv;
}

double EntropyState1D::total_variation() const {
  return hgf::total_variation(avgs_, boundary_ == Boundary::Periodic);
}

double EntropyState1D::min_value() const { return *std::min_element(avgs_.begin(), avgs_.end()); }
double EntropyState1D::max_value() const { return *std::max_element(avgs_.begin(), avgs_.end()); }

GradientFieldSample EntropyState1D::as_field() const {
  const double h = cell_width();
  const int n = static_cast<int>(avgs_.size());
  GridN centres = boundary_ == Boundary::Periodic
                      ? GridN::line(grid_.lo(0) + 0.5 * h, grid_.hi(0) + 0.5 * h, n, true)
                      : GridN::line(grid_.lo(0) + 0.5 * h, grid_.hi(0) - 0.5 * h, n - 1, false);
  std::vector<Vec> values;
  values.reserve(avgs_.size());
  for (double u : avgs_) values.push_back(Vec{u});
  return GradientFieldSample(std::move(centres), t_, std::move(values));
}

double godunov_flux(double vl, double vr) {
  if (vl <= vr) {
    if (vl > 0.0) return 0.5 * vl * vl;
    if (vr < 0.0) return 0.5 * vr * vr;
    return 0.0;
  }
  return 0.5 * std::max(vl * vl, vr * vr);
}

GodunovSolver::GodunovSolver(const EntropyState1D& initial, const SolverOptions& options)
    : initial_(initial),
      options_(options),
      u_(initial.cell_avgs().begin(), initial.cell_avgs().end()),
      flux_(initial.size() + 1),
      t_(initial.t()) {
  if (!(options.cfl > 0.0 && options.cfl <= 0.95)) throw ContractViolation("cfl must lie in (0, 0.95]");
  if (!(options.floor_speed > 0.0)) throw ContractViolation("floor_speed must be positive");
  const GridN& g = initial.grid();
  anchor_interface_ = origin_anchor(GridN::line(g.lo(0), g.hi(0), g.cells(0), false));
}

double GodunovSolver::step(double max_dt) {
  const std::size_t n = u_.size();
  const double h = initial_.cell_width();
  double speed = 0.0;
  for (double u : u_) speed = std::max(speed, std::abs(u));
  const double dt = std::min(options_.cfl * h / std::max(speed, options_.floor_speed), max_dt);
  if (!(dt > 0.0)) throw ContractViolation("time step must be positive");

  // flux_[j] sits on the left face of cell j.
  const bool periodic = initial_.boundary() == Boundary::Periodic;
  flux_[0] = godunov_flux(periodic ? u_[n - 1] : u_[0], u_[0]);
  for (std::size_t j = 1; j < n; ++j) flux_[j] = godunov_flux(u_[j - 1], u_[j]);
  flux_[n] = periodic ? flux_[0] : godunov_flux(u_[n - 1], u_[n - 1]);

  const double r = dt / h;
  for (std::size_t i = 0; i < n; ++i) {
    u_[i] -= r * (flux_[i + 1] - flux_[i]);
    if (!std::isfinite(u_[i]))
      throw Error("non-finite Godunov update at cell " + std::to_string(i) + ", t = " + std::to_string(t_));
  }
  anchor_flux_integral_ += dt * flux_[anchor_interface_];
  t_ += dt;
  ++steps_;
  return dt;
}

void GodunovSolver::advance_to(double t_end, const StepObserver& observer) {
  if (t_end < t_) throw ContractViolation("cannot advance backwards in time");
  while (t_ < t_end) {
    const double remaining = t_end - t_;
    step(remaining);
    // Land exactly on the target instead of accumulating rounding drift.
    if (t_end - t_ <= 1e-14 * std::max(1.0, t_end)) t_ = t_end;
    if (observer) observer(t_, u_);
  }
}

EntropyState1D GodunovSolver::state() const { return initial_.evolved(t_, u_); }

EntropyState1D step(const EntropyState1D& state, double cfl) {
  GodunovSolver solver(state, SolverOptions{cfl});
  solver.step();
  return solver.state();
}

EntropyState1D advance(const EntropyState1D& state, double t_end, double cfl, const StepObserver& observer) {
  GodunovSolver solver(state, SolverOptions{cfl});
  solver.advance_to(t_end, observer);
  return solver.state();
}

// ---------------------------------------------------------------------------
// Lax-Oleinik oracle

namespace {

struct Objective {
  const PotentialFn& phi;
  double t, x;
  double operator()(double y) const { return phi.value(Vec{y}) + (x - y) * (x - y) / (2.0 * t); }
  double slope(double y) const { return phi.gradient(Vec{y})[0] + (y - x) / t; }
  double curvature(double y) const { return phi.hessian(Vec{y})(0, 0) + 1.0 / t; }
};

// Golden-section search on [a, b] followed by a guarded Newton polish on the
// stationarity condition.
std::pair<double, double> refine_minimum(const Objective& f, double a, double b) {
  constexpr double g = 0.6180339887498949;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  const double tol = 1e-9 * std::max(1.0, std::abs(a) + std::abs(b));
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  double y = fc <= fd ? c : d;
  double fy = std::min(fc, fd);
  for (int it = 0; it < 8; ++it) {
    const double s = f.slope(y), k = f.curvature(y);
    if (!(k > 0.0) || !std::isfinite(s)) break;
    const double ny = y - s / k;
    if (ny == y || std::abs(ny - y) > 1e-6 * (1.0 + std::abs(y)) || !(std::abs(f.slope(ny)) < std::abs(s))) break;
    y = ny;
    fy = f(ny);
  }
  return {y, fy};
}

}  // namespace

LaxOleinikResult lax_oleinik(const PotentialFn& phi, double t, double x, int search_grid,
                             std::optional<double> search_radius, double tie_tol) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ContractViolation("lax_oleinik needs t > 0");
  if (phi.dim() != 1) throw ContractViolation("lax_oleinik needs a 1-D potential");
  if (search_grid < 3) throw ContractViolation("lax_oleinik needs at least 3 search candidates");
  double radius = 0.0;
  if (search_radius) {
    radius = *search_radius;
  } else if (phi.slope_bound) {
    // Minimisers satisfy |x - y| = t |v0(y)| <= t sup|v0|.
    radius = 1.05 * t * *phi.slope_bound + 1e-9;
  } else {
    throw ContractViolation("lax_oleinik needs a search radius or a potential with a slope bound");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ContractViolation("search radius must be positive");

  const Objective f{phi, t, x};
  const auto k_max = static_cast<std::size_t>(search_grid);
  const double dy = 2.0 * radius / static_cast<double>(k_max - 1);
  std::vector<double> vals(k_max);
  for (std::size_t k = 0; k < k_max; ++k) vals[k] = f(x - radius + static_cast<double>(k) * dy);

  struct Candidate {
    double y, value;
  };
  std::vector<Candidate> candidates;
  for (std::size_t k = 0; k < k_max; ++k) {
    const bool left_ok = k == 0 || vals[k] <= vals[k - 1];
    const bool right_ok = k + 1 == k_max || vals[k] <= vals[k + 1];
    if (!(left_ok && right_ok)) continue;
    const double a = x - radius + static_cast<double>(k == 0 ? 0 : k - 1) * dy;
    const double b = x - radius + static_cast<double>(std::min(k + 1, k_max - 1)) * dy;
    const auto [y, v] = refine_minimum(f, a, b);
    candidates.push_back({y, v});
  }

  double best = candidates.front().value;
  for (const auto& c : candidates) best = std::min(best, c.value);
  const double tie = tie_tol * std::max(1.0, std::abs(best));

  LaxOleinikResult result;
  bool have = false;
  double rightmost = 0.0;
  for (const auto& c : candidates) {
    if (c.value > best + tie) continue;
    if (!have || c.y < result.minimizer) result.minimizer = c.y;
    rightmost = have ? std::max(rightmost, c.y) : c.y;
    have = true;
  }
  // Distinct tied minimisers (farther apart than the scan resolution) mark a shock.
  result.shock_point = rightmost - result.minimizer > 2.0 * dy;
  result.value = (x - result.minimizer) / t;
  return result;
}

// ---------------------------------------------------------------------------
// Shock detection

std::vector<ShockRecord> detect_shocks(std::span<const double> u, const GridN& grid, Boundary boundary, double t,
                                       const ShockOptions& options) {
  const bool periodic = boundary == Boundary::Periodic;
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  std::vector<ShockRecord> out;
  if (n < 2) return out;
  const double tv = total_variation(u, periodic);
  if (!(tv > 0.0)) return out;
  const double threshold = options.jump_tol * tv;

  auto at = [&](std::ptrdiff_t i) {
    if (periodic) return u[static_cast<std::size_t>(((i % n) + n) % n)];
    return u[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, n - 1))];
  };
  // Interface j separates cells j and j + 1.
  const std::ptrdiff_t interfaces = periodic ? n : n - 1;
  auto window_drop = [&](std::ptrdiff_t j) {
    return std::max(at(j - 1), at(j)) - std::min(at(j + 1), at(j + 2));
  };

  std::vector<std::ptrdiff_t> flagged;
  for (std::ptrdiff_t j = 0; j < interfaces; ++j)
    if (window_drop(j) > threshold) flagged.push_back(j);
  if (flagged.empty()) return out;

  std::vector<std::vector<std::ptrdiff_t>> clusters{{flagged.front()}};
  for (std::size_t k = 1; k < flagged.size(); ++k) {
    if (flagged[k] - clusters.back().back() <= options.cluster_width)
      clusters.back().push_back(flagged[k]);
    else
      clusters.push_back({flagged[k]});
  }
  if (periodic && clusters.size() > 1 &&
      clusters.front().front() + n - clusters.back().back() <= options.cluster_width) {
    for (std::ptrdiff_t j : clusters.front()) clusters.back().push_back(j + n);
    clusters.erase(clusters.begin());
  }

  const double h = grid.spacing(0);
  const double length = grid.hi(0) - grid.lo(0);
  for (const auto& cluster : clusters) {
    std::ptrdiff_t sharpest = cluster.front();
    double jump = 0.0;
    for (std::ptrdiff_t j : cluster) {
      if (at(j) - at(j + 1) > at(sharpest) - at(sharpest + 1)) sharpest = j;
      jump = std::max(jump, window_drop(j));
    }
    double location = grid.lo(0) + static_cast<double>(sharpest + 1) * h;
    if (periodic) {
      while (location >= grid.hi(0)) location -= length;
    }
    ShockRecord rec;
    rec.detection_time = t;
    rec.location = location;
    rec.jump = jump;
    rec.history.emplace_back(t, location);
    out.push_back(std::move(rec));
  }
  std::sort(out.begin(), out.end(), [](const ShockRecord& a, const ShockRecord& b) { return a.location < b.location; });
  return out;
}

std::vector<ShockRecord> detect_shocks(const EntropyState1D& state, const ShockOptions& options) {
  return detect_shocks(state.cell_avgs(), state.grid(), state.boundary(), state.t(), options);
}

void ShockTracker::observe(const std::vector<ShockRecord>& detections, const GridN& grid) {
  const double radius = radius_cells_ * grid.spacing(0);
  const double length = grid.hi(0) - grid.lo(0);
  auto distance = [&](double a, double b) {
    double d = std::abs(a - b);
    if (grid.periodic(0)) d = std::min(d, length - d);
    return d;
  };
  std::vector<std::size_t> next_active;
  std::vector<bool> used(active_.size(), false);
  for (const ShockRecord& d : detections) {
    std::size_t best = active_.size();
    double best_dist = radius;
    for (std::size_t k = 0; k < active_.size(); ++k) {
      if (used[k]) continue;
      const double dist = distance(records_[active_[k]].location, d.location);
      if (dist <= best_dist) {
        best = k;
        best_dist = dist;
      }
    }
    if (best < active_.size()) {
      used[best] = true;
      ShockRecord& rec = records_[active_[best]];
      rec.location = d.location;
      rec.jump = d.jump;
      rec.history.emplace_back(d.detection_time, d.location);
      next_active.push_back(active_[best]);
    } else {
      records_.push_back(d);
      next_active.push_back(records_.size() - 1);
    }
  }
  active_ = std::move(next_active);
}

std::optional<double> ShockTracker::first_detection_time() const {
  std::optional<double> first;
  for (const auto& r : records_)
    if (!first || r.detection_time < *first) first = r.detection_time;
  return first;
}

// ---------------------------------------------------------------------------
// Long-time decay

FlowTrace decay_profile(const EntropyState1D& initial, double horizon, std::span<const double> checkpoints,
                        const DecayOptions& options) {
  if (!(horizon >= 10.0)) throw ContractViolation("decay_profile needs horizon >= 10");
  if (checkpoints.empty()) throw ContractViolation("decay_profile needs at least one checkpoint");
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    if (!(checkpoints[k] >= initial.t() && checkpoints[k] <= horizon))
      throw ContractViolation("checkpoints must lie in [t0, horizon]");
    if (k > 0 && !(checkpoints[k] > checkpoints[k - 1]))
      throw ContractViolation("checkpoints must be strictly increasing");
  }

  const bool periodic = initial.boundary() == Boundary::Periodic;
  const double length = domain_length(initial.grid());
  FlowTrace trace;
  trace.mean_value = periodic ? initial.initial_mass() / length : 0.0;

  GodunovSolver solver(initial, options.solver);
  ShockTracker tracker;
  auto on_step = [&](double t, std::span<const double> u) {
    if (options.track_shocks) tracker.observe(detect_shocks(u, initial.grid(), initial.boundary(), t, options.shocks), initial.grid());
    if (options.observer) options.observer(t, u);
  };

  auto record = [&] {
    const auto u = solver.values();
    FlowTraceRow row;
    row.t = solver.time();
    double sum = 0.0;
    for (double v : u) {
      row.sup_dev = std::max(row.sup_dev, std::abs(v - trace.mean_value));
      sum += v;
    }
    row.mean = sum * initial.cell_width() / length;
    row.tv = total_variation(u, periodic);
    const auto shocks = detect_shocks(u, initial.grid(), initial.boundary(), row.t, options.shocks);
    row.n_shocks = static_cast<int>(shocks.size());
    if (!shocks.empty()) row.shock_loc_1 = shocks.front().location;
    trace.rows.push_back(row);
    if (options.on_checkpoint) options.on_checkpoint(solver.state(), solver.anchor_flux_integral());
  };

  for (double tc : checkpoints) {
    solver.advance_to(tc, on_step);
    record();
  }
  solver.advance_to(horizon, on_step);

  trace.shocks = tracker.records();
  trace.first_shock_time = tracker.first_detection_time();
  trace.steps = solver.steps_taken();

  std::vector<double> ts, ys;
  for (std::size_t k = trace.rows.size() / 2; k < trace.rows.size(); ++k) {
    ts.push_back(trace.rows[k].t);
    ys.push_back(trace.rows[k].sup_dev);
  }
  trace.fitted_slope = loglog_slope(ts, ys);
  return trace;
}

}  // namespace hgf
