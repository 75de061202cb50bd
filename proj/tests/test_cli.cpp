#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hgf/builtins.hpp"
#include "hgf/errors.hpp"
#include "hgf/io.hpp"
#include "hgf/pipeline.hpp"
#include "hgf/scenario.hpp"

using namespace hgf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hgf_test_cli_" + std::to_string(::getpid())) / name;
  fs::create_directories(p.parent_path());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = std::string("\"") + HGF_CLI_PATH + "\" " + args + " > \"" + stdout_file.string() +
                          "\" 2> \"" + stdout_file.string() + ".err\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string scenario_file(const std::string& name) { return std::string(HGF_SOURCE_DIR) + "/scenarios/" + name; }

}  // namespace

TEST_CASE("parse_scenario reads keys, comments and checkpoints") {
  const Scenario s = parse_scenario(
      "# header\n"
      "scenario.kind = Periodic1D   # trailing comment\n"
      "scenario.dim = 1\n"
      "potential.name = neg_cos\n"
      "potential.offset = 0.3\n"
      "grid.lo = 0\n"
      "grid.hi = 6.283185307179586\n"
      "grid.cells = 128\n"
      "run.horizon = 20\n"
      "run.checkpoints = 1, 2.5 ,20\n");
  CHECK(s.kind == ScenarioKind::Periodic1D);
  CHECK(s.offset == 0.3);
  CHECK(s.cells == 128);
  REQUIRE(s.checkpoints.size() == 3u);
  CHECK(s.checkpoints[1] == 2.5);
  CHECK(s.entries.size() == 9u);
  CHECK(make_potential(s).gradient(Vec{0.0})[0] == doctest::Approx(0.3));
}

TEST_CASE("parse_scenario rejects malformed input") {
  const std::string base = "scenario.kind = ConvexND\nscenario.dim = 2\n";
  CHECK_THROWS_AS(parse_scenario(base + "run.checkpoints =\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(base + "run.checkpoints = 2, 1\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(base + "run.checkpoints = 1\nrun.horizon = 0.5\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(base + "bogus.key = 1\nrun.checkpoints = 1\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(base + "scenario.dim = 3\nrun.checkpoints = 1\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(base + "grid.cells = ten\nrun.checkpoints = 1\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(base + "no equals sign\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("scenario.kind = Periodic1D\nscenario.dim = 1\nrun.horizon = 5\nrun.checkpoints = 1\n"),
                  ScenarioError);
  CHECK_THROWS_AS(parse_scenario(base + "potential.name = nope\nrun.checkpoints = 1\n"), ScenarioError);
}

TEST_CASE("monomial parsing and builtin catalogue") {
  const auto terms = parse_monomials("0.5:2,0; -1:1,1", 2);
  REQUIRE(terms.size() == 2u);
  CHECK(terms[1].coefficient == -1.0);
  CHECK(terms[1].exponents == std::vector<int>{1, 1});
  const PotentialFn p = polynomial(2, terms);
  CHECK(p.value(Vec{2.0, 3.0}) == doctest::Approx(2.0 - 6.0));
  CHECK(p.gradient(Vec{2.0, 3.0})[0] == doctest::Approx(2.0 - 3.0));
  CHECK(p.hessian(Vec{2.0, 3.0})(0, 1) == doctest::Approx(-1.0));
  CHECK_THROWS(parse_monomials("1:2", 2));
  CHECK_THROWS(parse_monomials("x:1,1", 2));
  CHECK(builtin_catalogue().size() >= 5u);
}

TEST_CASE("required_half_width for compact data") {
  const PotentialFn b = bump(1.0, 0.2);
  // Support 0.2 plus min(1 * 200, sqrt(2 * (16/15) * 0.2 * 200)).
  CHECK(required_half_width(b, 200.0) == doctest::Approx(0.2 + std::sqrt(2.0 * 16.0 / 15.0 * 0.2 * 200.0)));
  CHECK_THROWS_AS(required_half_width(neg_cos(1), 10.0), DomainTooSmall);
}

TEST_CASE("CSV and JSON formatting round-trips doubles") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
  CsvTable t({"a", "b"});
  t.add_row({1.0, std::nan("")});
  CHECK(t.str() == "a,b\n1,\n");
  CHECK_THROWS_AS(t.add_row({1.0}), InvalidInput);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("runs are byte-identical and the manifest verifies") {
  const Scenario s = load_scenario(scenario_file("sine_offset.scn"));
  const fs::path a = scratch("run_a"), b = scratch("run_b");
  run_scenario(s, a);
  run_scenario(s, b);
  CHECK(verify_manifest(a).empty());
  for (const char* f : {"trace.csv", "flattening.csv", "shocks.json"}) CHECK(slurp(a / f) == slurp(b / f));
  std::ofstream(a / "trace.csv", std::ios::app) << "tampered\n";
  CHECK(verify_manifest(a) == std::vector<std::string>{"trace.csv"});
}

TEST_CASE("command line exit codes") {
  const fs::path out = scratch("stdout.txt");
  CHECK(run_cli("verify --scenario \"" + scenario_file("paraboloid_2d.scn") + "\"", out) == 0);
  Json j = Json::parse(slurp(out));
  CHECK(j["delta"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["verdict"] == "StrictlyConvexMargin");

  CHECK(run_cli("verify --scenario \"" + scenario_file("linear.scn") + "\"", out) == 0);
  j = Json::parse(slurp(out));
  CHECK(j["delta"].get<double>() == 0.0);
  CHECK(j["verdict"] == "GloballySmooth");

  CHECK(run_cli("verify --scenario \"" + scenario_file("neg_cos_convex.scn") + "\"", out) == 3);
  CHECK(run_cli("run --scenario \"" + scenario_file("neg_cos_convex.scn") + "\" --out \"" +
                    scratch("neg").string() + "\"",
                out) == 2);
  const Json diag = Json::parse(slurp(out.string() + ".err"));
  CHECK(diag["kind"] == "ContractViolation");

  const fs::path bad = scratch("bad.scn");
  std::ofstream(bad) << "scenario.kind = ConvexND\nscenario.dim = 1\nrun.checkpoints =\n";
  CHECK(run_cli("run --scenario \"" + bad.string() + "\"", out) == 2);
  CHECK(run_cli("verify --scenario /nonexistent/file.scn", out) == 2);
  CHECK(run_cli("list-builtins", out) == 0);
  CHECK(slurp(out).find("paraboloid") != std::string::npos);
  CHECK(run_cli("frobnicate", out) == 2);
}

TEST_CASE("command line run writes the documented files") {
  const fs::path out = scratch("stdout_run.txt");
  const fs::path dir = scratch("paraboloid_run");
  REQUIRE(run_cli("run --threads 2 --scenario \"" + scenario_file("paraboloid_2d.scn") + "\" --out \"" +
                      dir.string() + "\"",
                  out) == 0);
  for (const char* f : {"report.json", "trace.csv", "flattening.csv", "manifest.json"}) CHECK(fs::exists(dir / f));
  const Json report = Json::parse(slurp(dir / "report.json"));
  CHECK(report["convexity"]["delta"].get<double>() == doctest::Approx(1.0));
  CHECK(verify_manifest(dir).empty());
}
