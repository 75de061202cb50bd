#pragma once

// Flat key-value scenario files.
//
//   # comment
//   scenario.kind = Periodic1D        ConvexND | Periodic1D | L1_1D
//   scenario.dim = 1
//   potential.name = neg_cos
//   grid.lo = 0
//   grid.hi = 6.283185307179586
//   grid.cells = 1024
//   run.horizon = 100
//   run.checkpoints = 5, 10, 20, 50, 100
//
// One `key = value` per line; whitespace around keys and values is ignored,
// and `#` starts a comment anywhere on a line.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hgf/potential.hpp"

namespace hgf {

enum class ScenarioKind { ConvexND, Periodic1D, L1_1D };

std::string_view to_string(ScenarioKind kind);

struct Scenario {
  ScenarioKind kind = ScenarioKind::ConvexND;
  int dim = 1;

  std::string potential = "paraboloid";
  double scale = 1.0;
  double offset = 0.0;
  double amplitude = 1.0;
  double width = 1.0;
  std::string terms;

  double grid_lo = -1.0;
  double grid_hi = 1.0;
  int cells = 64;

  double horizon = 10.0;
  std::vector<double> checkpoints;

  double cfl = 0.9;
  double newton_tol = 1e-12;
  std::optional<double> curl_tol;
  int samples = 17;
  int tube_cells = 64;

  std::string output_dir = "out";

  /// Entries as read, in file order, for echoing into reports.
  std::vector<std::pair<std::string, std::string>> entries;
};

/// Parses and validates scenario text. Throws ScenarioError.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario(const std::string& path);

/// The initial potential named by the scenario.
PotentialFn make_potential(const Scenario& s);

/// Smallest half-width L for an outflow domain [-L, L]: support radius plus
/// the distance the support can spread by the horizon.
double required_half_width(const PotentialFn& phi, double horizon);

}  // namespace hgf
