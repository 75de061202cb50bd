#include "hgf/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "hgf/errors.hpp"

namespace hgf {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const GridN& g) {
  Json j;
  j["dim"] = g.dim();
  j["lo"] = to_json(g.lo());
  j["hi"] = to_json(g.hi());
  Json cells = Json::array(), periodic = Json::array(), nodes = Json::array();
  for (int a = 0; a < g.dim(); ++a) {
    cells.push_back(g.cells(a));
    periodic.push_back(g.periodic(a));
    nodes.push_back(g.nodes(a));
  }
  j["cells"] = cells;
  j["nodes"] = nodes;
  j["periodic"] = periodic;
  j["layout"] = "axis0-fastest";
  return j;
}

Json to_json(const ConvexityReport& r) {
  Json j;
  j["box_lo"] = to_json(r.box_lo);
  j["box_hi"] = to_json(r.box_hi);
  j["samples_per_axis"] = r.samples_per_axis;
  Json pts = Json::array();
  for (const Vec& p : r.sampled_points) pts.push_back(to_json(p));
  j["sampled_points"] = pts;
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["global_min_eigenvalue"] = r.global_min_eigenvalue;
  j["argmin"] = to_json(r.argmin);
  j["mean_eigenvalue"] = r.mean_eigenvalue;
  j["delta"] = r.delta;
  j["verdict"] = std::string(to_string(r.verdict));
  j["blowup_estimate"] = r.blowup_estimate ? Json(*r.blowup_estimate) : Json(nullptr);
  j["eig_tol"] = r.eig_tol;
  return j;
}

Json to_json(const ShockRecord& r) {
  Json j;
  j["detection_time"] = r.detection_time;
  j["location"] = r.location;
  j["jump"] = r.jump;
  Json h = Json::array();
  for (const auto& [t, x] : r.history) h.push_back(Json::array({t, x}));
  j["history"] = h;
  return j;
}

Json to_json(const FlowTrace& t) {
  Json j;
  j["M"] = t.mean_value;
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row;
    row["t"] = r.t;
    row["sup_dev"] = r.sup_dev;
    row["mean"] = r.mean;
    row["tv"] = r.tv;
    row["n_shocks"] = r.n_shocks;
    row["shock_loc_1"] = r.shock_loc_1 ? Json(*r.shock_loc_1) : Json(nullptr);
    rows.push_back(row);
  }
  j["rows"] = rows;
  Json shocks = Json::array();
  for (const auto& s : t.shocks) shocks.push_back(to_json(s));
  j["shocks"] = shocks;
  j["first_shock_time"] = t.first_shock_time ? Json(*t.first_shock_time) : Json(nullptr);
  j["fitted_slope"] = t.fitted_slope ? Json(*t.fitted_slope) : Json(nullptr);
  j["steps"] = t.steps;
  return j;
}

Json to_json(const FlatteningReport& r) {
  Json j;
  j["times"] = r.times;
  if (!r.sup_d2.empty()) {
    j["sup_d2"] = r.sup_d2;
    j["sup_d3"] = r.sup_d3;
    j["tube_nodes"] = r.tube_nodes;
    j["d2_noise"] = r.d2_noise;
    j["d3_noise"] = r.d3_noise;
  }
  j["fitted_slopes"] =
      r.fitted_slopes ? Json::array({r.fitted_slopes->first, r.fitted_slopes->second}) : Json(nullptr);
  if (r.straight_line_slope) {
    j["straight_line_slope"] = *r.straight_line_slope;
    j["initial_deviation"] = r.initial_deviation;
    j["deviations"] = r.deviations;
    j["deviation_slope"] = r.deviation_slope ? Json(*r.deviation_slope) : Json(nullptr);
  }
  return j;
}

Json snapshot_json(const GraphSample& g, const std::string& quantity) {
  Json j;
  j["quantity"] = quantity;
  j["t"] = g.t;
  j["grid"] = to_json(g.grid);
  j["anchor_node"] = g.anchor_node;
  j["anchor_point"] = to_json(g.grid.node(g.anchor_node));
  j["anchor_value"] = g.anchor_value();
  j["values"] = g.heights;
  return j;
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != columns_) throw InvalidInput("CSV row width does not match header");
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) text_ += ',';
    if (!std::isnan(row[i])) text_ += format_real(row[i]);
  }
  text_ += '\n';
}

std::string CsvTable::str() const { return text_; }

CsvTable trace_csv(const FlowTrace& trace) {
  CsvTable csv({"t", "sup_dev", "mean", "tv", "n_shocks", "shock_loc_1"});
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : trace.rows)
    csv.add_row({r.t, r.sup_dev, r.mean, r.tv, static_cast<double>(r.n_shocks), r.shock_loc_1.value_or(nan)});
  return csv;
}

CsvTable graph_csv(const GraphSample& g, const std::string& value_name) {
  static const char* axis_names[] = {"x1", "x2", "x3"};
  std::vector<std::string> header;
  for (int a = 0; a < g.grid.dim(); ++a) header.emplace_back(g.grid.dim() == 1 ? "x" : axis_names[a]);
  header.push_back(value_name);
  CsvTable csv(header);
  std::vector<double> row(header.size());
  for (std::size_t p = 0; p < g.grid.node_count(); ++p) {
    const Vec x = g.grid.node(p);
    for (int a = 0; a < x.dim(); ++a) row[static_cast<std::size_t>(a)] = x[a];
    row.back() = g.heights[p];
    csv.add_row(row);
  }
  return csv;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw Error("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw Error("no manifest.json in " + dir.string());
  const Json m = Json::parse(in);
  std::vector<std::string> bad;
  for (const auto& f : m.at("files")) {
    const std::string rel = f.at("path").get<std::string>();
    const auto p = dir / rel;
    if (!std::filesystem::exists(p) || sha256_file(p) != f.at("sha256").get<std::string>()) bad.push_back(rel);
  }
  return bad;
}

}  // namespace hgf
