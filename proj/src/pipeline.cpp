#include "hgf/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "hgf/characteristics.hpp"
#include "hgf/entropy1d.hpp"
#include "hgf/errors.hpp"
#include "hgf/fields.hpp"
#include "hgf/fit.hpp"
#include "hgf/parallel.hpp"
#include "hgf/reconstruction.hpp"

namespace hgf {

namespace fs = std::filesystem;

GridN sampling_box(const Scenario& s) {
  return GridN::box(Vec::filled(s.dim, s.grid_lo), Vec::filled(s.dim, s.grid_hi), s.cells);
}

ConvexityReport verify_scenario(const Scenario& s) {
  return existence_verdict(make_potential(s), sampling_box(s), s.samples);
}

namespace {

class PhaseClock {
 public:
  void start(std::string name) {
    name_ = std::move(name);
    begin_ = std::chrono::steady_clock::now();
  }
  void stop() {
    phases_[name_] = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin_).count();
  }
  Json json() const {
    Json j = Json::object();
    for (const auto& [k, v] : phases_) j[k] = v;
    return j;
  }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point begin_;
  std::map<std::string, double> phases_;
};

// Tracks files written during a run, for the manifest.
class OutputDir {
 public:
  explicit OutputDir(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

  void write(const std::string& rel, const std::string& text) {
    write_text(root_ / rel, text);
    ManifestFile f;
    f.path = rel;
    f.sha256 = sha256_hex(text);
    f.bytes = text.size();
    files_.push_back(std::move(f));
  }

  const fs::path& root() const { return root_; }
  const std::vector<ManifestFile>& files() const { return files_; }

 private:
  fs::path root_;
  std::vector<ManifestFile> files_;
};

std::string indexed(const std::string& stem, std::size_t k, const std::string& ext) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%03zu", k);
  return stem + buf + ext;
}

Json scenario_echo(const Scenario& s) {
  Json j = Json::object();
  for (const auto& [k, v] : s.entries) j[k] = v;
  return j;
}

Json convex_pipeline(const Scenario& s, OutputDir& out, PhaseClock& clock, Json& report) {
  const PotentialFn phi = make_potential(s);
  const GridN box = sampling_box(s);

  clock.start("convexity");
  ConvexityReport cert = existence_verdict(phi, box, s.samples);
  clock.stop();
  report["convexity"] = to_json(cert);
  if (cert.verdict == Verdict::BlowUpExpected)
    throw ContractViolation("ConvexND pipeline needs convex data; verdict is BlowUpExpected (blow-up near t = " +
                            format_real(*cert.blowup_estimate) + ")");

  const CharMap map(phi, 0.0, cert);
  const NewtonOptions newton{s.newton_tol, 50};

  clock.start("characteristics");
  std::map<double, GradientFieldSample> fields;
  Json checks = Json::array();
  CsvTable trace({"t", "sup_slope", "min_det_jacobian", "curl_residual", "anchor_value"});
  std::vector<double> sup_slopes, min_dets, curls;
  for (double t : s.checkpoints) {
    const CharMap mt = map.at_time(t);
    const std::vector<Vec> alphas = sample_preimages(mt, box, newton);
    std::vector<Vec> slopes(alphas.size(), Vec(s.dim));
    std::vector<double> dets(alphas.size());
    parallel_for(alphas.size(), [&](std::size_t p) {
      slopes[p] = phi.gradient(alphas[p]);
      dets[p] = jacobian(mt, alphas[p]).det;
    });
    double sup = 0.0, min_det = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < alphas.size(); ++p) {
      sup = std::max(sup, slopes[p].norm_inf());
      min_det = std::min(min_det, dets[p]);
    }
    GradientFieldSample field(box, t, std::move(slopes));
    sup_slopes.push_back(sup);
    min_dets.push_back(min_det);
    curls.push_back(s.dim >= 2 ? curl_residual(field).max_abs : 0.0);
    fields.emplace(t, std::move(field));
  }
  clock.stop();

  clock.start("reconstruction");
  FlowSource src;
  src.field_at = [&](double t) { return fields.at(t); };
  src.value_at = [&](double t, const Vec& x) { return evaluate_solution(map.at_time(t), x, newton); };
  GaugeOptions gauge;
  gauge.curl_tol = s.curl_tol;
  PotentialEvolution evo(phi, src, gauge);
  evo.advance(s.checkpoints);
  for (std::size_t k = 0; k < s.checkpoints.size(); ++k) {
    const GraphSample& g = evo.snapshots()[k];
    out.write(indexed("snapshots/height", k, ".csv"), graph_csv(g).str());
    out.write(indexed("snapshots/height", k, ".json"), snapshot_json(g, "height").dump(1) + "\n");
    trace.add_row({s.checkpoints[k], sup_slopes[k], min_dets[k], curls[k], evo.anchor_series()[k]});
    Json c;
    c["t"] = s.checkpoints[k];
    c["sup_slope"] = sup_slopes[k];
    c["min_det_jacobian"] = min_dets[k];
    c["curl_residual"] = curls[k];
    c["anchor_value"] = evo.anchor_series()[k];
    checks.push_back(c);
  }
  clock.stop();
  out.write("trace.csv", trace.str());
  report["checkpoints"] = checks;

  if (s.checkpoints.size() >= 5) {
    clock.start("flattening");
    FlatteningOptions fo;
    fo.cells = s.tube_cells;
    fo.newton = newton;
    fo.gauge = gauge;
    const FlatteningReport fr = flattening_report(map, box.lo(), box.hi(), s.checkpoints, fo);
    clock.stop();
    CsvTable csv({"t", "sup_d2", "sup_d3", "tube_nodes"});
    for (std::size_t k = 0; k < fr.times.size(); ++k)
      csv.add_row({fr.times[k], fr.sup_d2[k], fr.sup_d3[k], static_cast<double>(fr.tube_nodes[k])});
    out.write("flattening.csv", csv.str());
    report["flattening"] = to_json(fr);
  }
  return report;
}

std::string time_label(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

Json one_d_pipeline(const Scenario& s, OutputDir& out, PhaseClock& clock, Json& report) {
  const PotentialFn phi = make_potential(s);
  const bool periodic = s.kind == ScenarioKind::Periodic1D;
  if (!periodic) {
    const double half = required_half_width(phi, s.horizon);
    if (s.grid_lo > -half || s.grid_hi < half)
      throw DomainTooSmall("outflow domain must contain [-" + format_real(half) + ", " + format_real(half) +
                           "] for horizon " + format_real(s.horizon));
  }

  clock.start("convexity");
  report["convexity"] = to_json(existence_verdict(phi, sampling_box(s), s.samples));
  clock.stop();

  const GridN grid = GridN::line(s.grid_lo, s.grid_hi, s.cells, periodic);
  const Boundary boundary = periodic ? Boundary::Periodic : Boundary::Outflow;
  const EntropyState1D initial = EntropyState1D::from_potential(phi, grid, boundary);
  const GridN interfaces = GridN::line(s.grid_lo, s.grid_hi, s.cells, false);
  const double anchor0 = phi.value(interfaces.node(origin_anchor(interfaces)));
  const double length = s.grid_hi - s.grid_lo;
  const double m = periodic ? initial.initial_mass() / length : 0.0;

  std::vector<GraphSample> curves;
  std::vector<std::vector<double>> slopes;
  std::vector<double> deviations;

  const double vmin = initial.min_value(), vmax = initial.max_value();
  const double slack = 1e-12 * std::max(1.0, std::max(std::abs(vmin), std::abs(vmax)));
  double last_tv = initial.total_variation();
  double worst_tv_increase = 0.0, worst_bound_excess = 0.0;
  bool max_principle = true, tv_ok = true;

  CsvTable cusp({"t", "steepest_descent", "max_cell_drop", "n_shocks"});
  const double cusp_window = std::min(s.horizon, 4.0);
  const double cusp_dt = cusp_window / 400.0;
  double next_cusp = 0.0;
  auto cusp_row = [&](double t, std::span<const double> u) {
    double steep = 0.0, drop = 0.0;
    const std::size_t n = u.size();
    for (std::size_t j = 0; j + 1 < n + (periodic ? 1 : 0); ++j) {
      const double d = u[j] - u[(j + 1) % n];
      drop = std::max(drop, d);
    }
    steep = drop / initial.cell_width();
    const auto shocks = detect_shocks(u, grid, boundary, t);
    cusp.add_row({t, steep, drop, static_cast<double>(shocks.size())});
  };
  cusp_row(0.0, initial.cell_avgs());
  next_cusp = cusp_dt;

  DecayOptions opts;
  opts.solver.cfl = s.cfl;
  opts.observer = [&](double t, std::span<const double> u) {
    for (double v : u) {
      const double excess = std::max(v - vmax, vmin - v);
      if (excess > slack) max_principle = false;
      worst_bound_excess = std::max(worst_bound_excess, excess);
    }
    const double tv = total_variation(u, periodic);
    const double growth = tv - last_tv;
    if (growth > 1e-12 * std::max(1.0, last_tv)) tv_ok = false;
    worst_tv_increase = std::max(worst_tv_increase, growth);
    last_tv = tv;
    if (t <= cusp_window + 1e-12 && t >= next_cusp) {
      cusp_row(t, u);
      while (next_cusp <= t) next_cusp += cusp_dt;
    }
  };
  opts.on_checkpoint = [&](const EntropyState1D& state, double flux_integral) {
    curves.push_back(reconstruct_curve(state, anchor0 - flux_integral));
    slopes.emplace_back(state.cell_avgs().begin(), state.cell_avgs().end());
    deviations.push_back(straight_line_deviation(state, m));
  };

  clock.start("entropy_solver");
  const FlowTrace trace = decay_profile(initial, s.horizon, s.checkpoints, opts);
  clock.stop();

  clock.start("output");
  out.write("trace.csv", trace_csv(trace).str());
  Json shocks = Json::array();
  for (const auto& r : trace.shocks) shocks.push_back(to_json(r));
  out.write("shocks.json", shocks.dump(1) + "\n");
  out.write("figures/cusp_formation.csv", cusp.str());

  const GradientFieldSample centres = initial.as_field();
  std::vector<std::string> slope_header{"x"}, curve_header{"x"};
  for (double t : s.checkpoints) {
    slope_header.push_back("v_t" + time_label(t));
    curve_header.push_back("F_t" + time_label(t));
  }
  CsvTable slope_fig(slope_header), curve_fig(curve_header);
  for (std::size_t i = 0; i < initial.size(); ++i) {
    std::vector<double> row{initial.cell_center(i)};
    for (const auto& u : slopes) row.push_back(u[i]);
    slope_fig.add_row(row);
  }
  for (std::size_t j = 0; j < interfaces.node_count(); ++j) {
    std::vector<double> row{interfaces.coord(0, static_cast<int>(j))};
    for (const auto& c : curves) row.push_back(c.heights[j]);
    curve_fig.add_row(row);
  }
  out.write("figures/slope_profiles.csv", slope_fig.str());
  out.write("figures/curve_profiles.csv", curve_fig.str());

  for (std::size_t k = 0; k < curves.size(); ++k) {
    out.write(indexed("snapshots/curve", k, ".csv"), graph_csv(curves[k]).str());
    out.write(indexed("snapshots/curve", k, ".json"), snapshot_json(curves[k], "height").dump(1) + "\n");
    const GraphSample slope_sample(centres.grid, s.checkpoints[k], slopes[k], 0);
    out.write(indexed("snapshots/slope", k, ".csv"), graph_csv(slope_sample, "v").str());
    out.write(indexed("snapshots/slope", k, ".json"), snapshot_json(slope_sample, "slope").dump(1) + "\n");
  }

  if (s.checkpoints.size() >= 5) {
    FlatteningReport fr;
    fr.times = s.checkpoints;
    fr.straight_line_slope = m;
    fr.initial_deviation = straight_line_deviation(initial, m);
    fr.deviations = deviations;
    if (fit_window_ok(fr.times)) fr.deviation_slope = loglog_slope(fr.times, fr.deviations);
    CsvTable csv({"t", "deviation"});
    for (std::size_t k = 0; k < fr.times.size(); ++k) csv.add_row({fr.times[k], fr.deviations[k]});
    out.write("flattening.csv", csv.str());
    report["flattening"] = to_json(fr);
  }
  clock.stop();

  report["flow_trace"] = to_json(trace);
  Json inv;
  inv["max_principle"] = max_principle;
  inv["max_bound_excess"] = worst_bound_excess;
  inv["tv_non_increasing"] = tv_ok;
  inv["max_tv_increase"] = worst_tv_increase;
  inv["initial_mass"] = initial.initial_mass();
  bool admissible = true;
  for (const auto& r : trace.shocks) admissible = admissible && r.jump > 0.0;
  inv["shocks_admissible"] = admissible;
  report["invariants"] = inv;
  return report;
}

}  // namespace

Json run_scenario(const Scenario& s, const fs::path& out_dir) {
  OutputDir out(out_dir);
  PhaseClock clock;
  Json report;
  report["scenario"] = scenario_echo(s);
  report["kind"] = std::string(to_string(s.kind));
  if (s.kind == ScenarioKind::ConvexND)
    convex_pipeline(s, out, clock, report);
  else
    one_d_pipeline(s, out, clock, report);
  out.write("report.json", report.dump(1) + "\n");

  Json manifest;
  manifest["scenario"] = scenario_echo(s);
  manifest["library_version"] = std::string(kLibraryVersion);
  manifest["threads"] = thread_count();
  manifest["phases_seconds"] = clock.json();
  Json files = Json::array();
  for (const auto& f : out.files()) {
    Json e;
    e["path"] = f.path;
    e["sha256"] = f.sha256;
    e["bytes"] = f.bytes;
    files.push_back(e);
  }
  manifest["files"] = files;
  write_text(out.root() / "manifest.json", manifest.dump(1) + "\n");
  return manifest;
}

}  // namespace hgf
