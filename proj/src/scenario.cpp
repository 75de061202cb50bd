#include "hgf/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "hgf/builtins.hpp"
#include "hgf/errors.hpp"

namespace hgf {

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::ConvexND:
      return "ConvexND";
    case ScenarioKind::Periodic1D:
      return "Periodic1D";
    case ScenarioKind::L1_1D:
      return "L1_1D";
  }
  return "unknown";
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out))
    throw ScenarioError(key + ": expected a finite number, got '" + v + "'");
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ScenarioError(key + ": expected an integer, got '" + v + "'");
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_real(key, item));
  }
  return out;
}

void check_range(const std::string& key, double v, double lo, double hi) {
  if (!(v >= lo && v <= hi))
    throw ScenarioError(key + " = " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::map<std::string, std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ScenarioError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ScenarioError("line " + std::to_string(lineno) + ": empty key");
    if (!seen.emplace(key, value).second) throw ScenarioError("duplicate key " + key);
    s.entries.emplace_back(key, value);
  }

  bool have_checkpoints = false;
  for (const auto& [key, v] : s.entries) {
    if (key == "scenario.kind") {
      if (v == "ConvexND") s.kind = ScenarioKind::ConvexND;
      else if (v == "Periodic1D") s.kind = ScenarioKind::Periodic1D;
      else if (v == "L1_1D") s.kind = ScenarioKind::L1_1D;
      else throw ScenarioError("scenario.kind must be ConvexND, Periodic1D or L1_1D, got '" + v + "'");
    } else if (key == "scenario.dim") {
      s.dim = parse_int(key, v);
    } else if (key == "potential.name") {
      s.potential = v;
    } else if (key == "potential.scale") {
      s.scale = parse_real(key, v);
    } else if (key == "potential.offset") {
      s.offset = parse_real(key, v);
    } else if (key == "potential.amplitude") {
      s.amplitude = parse_real(key, v);
    } else if (key == "potential.width") {
      s.width = parse_real(key, v);
    } else if (key == "potential.terms") {
      s.terms = v;
    } else if (key == "grid.lo") {
      s.grid_lo = parse_real(key, v);
    } else if (key == "grid.hi") {
      s.grid_hi = parse_real(key, v);
    } else if (key == "grid.cells") {
      s.cells = parse_int(key, v);
    } else if (key == "run.horizon") {
      s.horizon = parse_real(key, v);
    } else if (key == "run.checkpoints") {
      s.checkpoints = parse_list(key, v);
      have_checkpoints = true;
    } else if (key == "solver.cfl") {
      s.cfl = parse_real(key, v);
    } else if (key == "solver.newton_tol") {
      s.newton_tol = parse_real(key, v);
    } else if (key == "solver.curl_tol") {
      s.curl_tol = parse_real(key, v);
    } else if (key == "solver.samples") {
      s.samples = parse_int(key, v);
    } else if (key == "solver.tube_cells") {
      s.tube_cells = parse_int(key, v);
    } else if (key == "output.dir") {
      s.output_dir = v;
    } else {
      throw ScenarioError("unknown key " + key);
    }
  }

  const bool one_d = s.kind != ScenarioKind::ConvexND;
  if (one_d && s.dim != 1) throw ScenarioError("1-D scenario kinds need scenario.dim = 1");
  if (s.dim < 1 || s.dim > 3) throw ScenarioError("scenario.dim must be 1, 2 or 3");
  const auto names = builtin_catalogue();
  if (std::none_of(names.begin(), names.end(), [&](const BuiltinInfo& b) { return b.name == s.potential; }))
    throw ScenarioError("unknown builtin potential '" + s.potential + "'");
  if (s.potential == "bump" && s.dim != 1) throw ScenarioError("bump is a 1-D potential");
  if (s.potential == "custom-polynomial" && s.terms.empty())
    throw ScenarioError("custom-polynomial needs potential.terms");
  if (!(s.grid_hi > s.grid_lo)) throw ScenarioError("grid.hi must exceed grid.lo");
  const int max_cells = one_d ? 1 << 16 : (s.dim == 3 ? 128 : 1024);
  if (s.cells < 8 || s.cells > max_cells)
    throw ScenarioError("grid.cells must lie in [8, " + std::to_string(max_cells) + "]");
  if (!(s.horizon > 0.0)) throw ScenarioError("run.horizon must be positive");
  if (one_d && s.horizon < 10.0) throw ScenarioError("1-D runs need run.horizon >= 10");
  if (!have_checkpoints || s.checkpoints.empty()) throw ScenarioError("run.checkpoints must list at least one time");
  for (std::size_t k = 0; k < s.checkpoints.size(); ++k) {
    if (s.checkpoints[k] < 0.0 || s.checkpoints[k] > s.horizon)
      throw ScenarioError("run.checkpoints must lie in [0, run.horizon]");
    if (k > 0 && !(s.checkpoints[k] > s.checkpoints[k - 1]))
      throw ScenarioError("run.checkpoints must be strictly increasing");
  }
  check_range("solver.cfl", s.cfl, 1e-3, 0.95);
  check_range("solver.newton_tol", s.newton_tol, 1e-15, 1e-6);
  if (s.curl_tol) check_range("solver.curl_tol", *s.curl_tol, 0.0, 1.0);
  check_range("solver.samples", s.samples, 16, s.dim == 3 ? 65 : 513);
  check_range("solver.tube_cells", s.tube_cells, 8, s.dim == 3 ? 48 : 256);
  if (s.output_dir.empty()) throw ScenarioError("output.dir must not be empty");
  try {
    (void)make_potential(s);
  } catch (const InvalidInput& e) {
    throw ScenarioError(e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot read scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

PotentialFn make_potential(const Scenario& s) {
  if (s.potential == "paraboloid") return paraboloid(s.dim, s.scale);
  if (s.potential == "neg_cos") return neg_cos(s.dim, s.amplitude, s.offset);
  if (s.potential == "log_cosh") return log_cosh(s.dim, s.scale, s.width);
  if (s.potential == "bump") return bump(s.amplitude, s.width);
  if (s.potential == "custom-polynomial") return polynomial(s.dim, parse_monomials(s.terms, s.dim));
  throw ScenarioError("unknown builtin potential '" + s.potential + "'");
}

double required_half_width(const PotentialFn& phi, double horizon) {
  if (!phi.support_radius || !phi.slope_bound)
    throw DomainTooSmall("outflow truncation needs a compactly supported slope with a known bound");
  // Characteristics move at most sup|v0| T. For non-negative mass m the
  // entropy solution is also supported within sqrt(2 m T) of the support
  // edge, which is far tighter at long horizons.
  double spread = *phi.slope_bound * horizon;
  if (phi.slope_mass) spread = std::min(spread, std::sqrt(2.0 * *phi.slope_mass * horizon));
  return *phi.support_radius + spread;
}

}  // namespace hgf
