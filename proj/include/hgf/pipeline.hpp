#pragma once

#include <filesystem>
#include <string_view>

#include "hgf/convexity.hpp"
#include "hgf/io.hpp"
#include "hgf/scenario.hpp"

namespace hgf {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

/// Box the convexity analysis samples: [grid.lo, grid.hi]^dim.
GridN sampling_box(const Scenario& s);

/// Convexity analysis only.
ConvexityReport verify_scenario(const Scenario& s);

/// Runs the full pipeline for the scenario kind and writes report.json,
/// trace.csv, flattening.csv (>= 5 checkpoints), snapshots/, figures/ (1-D)
/// and manifest.json into `out_dir`. Returns the manifest.
///
/// ConvexND scenarios whose data is not certified convex throw
/// ContractViolation before anything is written.
Json run_scenario(const Scenario& s, const std::filesystem::path& out_dir);

}  // namespace hgf
