#pragma once

// Serialization: JSON records, CSV tables with 17 significant digits, and
// SHA-256 content digests.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgf/convexity.hpp"
#include "hgf/entropy1d.hpp"
#include "hgf/grid.hpp"
#include "hgf/reconstruction.hpp"

namespace hgf {

using Json = nlohmann::ordered_json;

/// "%.17g", the shortest form guaranteed to round-trip a double.
std::string format_real(double v);

Json to_json(const Vec& v);
Json to_json(const GridN& g);
Json to_json(const ConvexityReport& r);
Json to_json(const ShockRecord& r);
Json to_json(const FlowTrace& t);
Json to_json(const FlatteningReport& r);

/// Self-describing snapshot envelope: grid metadata, time, anchor, heights.
Json snapshot_json(const GraphSample& g, const std::string& quantity);

/// Comma-separated table with a header row and LF line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  /// Values are formatted with format_real; NaN is written as an empty cell.
  void add_row(const std::vector<double>& row);
  std::string str() const;

 private:
  std::size_t columns_;
  std::string text_;
};

CsvTable trace_csv(const FlowTrace& trace);
/// x columns (one per axis) followed by `value_name`.
CsvTable graph_csv(const GraphSample& g, const std::string& value_name = "height");

void write_text(const std::filesystem::path& path, const std::string& text);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct ManifestFile {
  std::string path;  ///< relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Recomputes every digest listed in `dir`/manifest.json. Returns the paths
/// that are missing or do not match.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

}  // namespace hgf
