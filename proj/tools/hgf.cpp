// hgf: scenario-driven front end for the gradient-flow solvers.
//
//   hgf run --scenario FILE [--out DIR] [--threads N] [--seed N]
//   hgf verify --scenario FILE
//   hgf list-builtins
//
// Exit codes: 0 success, 2 precondition failure (bad scenario, uncertified
// data, domain too small), 3 from verify when blow-up is expected, 1 on
// internal errors. Diagnostics go to stderr as one JSON object per line.

#include <CLI11.hpp>

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "hgf/builtins.hpp"
#include "hgf/errors.hpp"
#include "hgf/io.hpp"
#include "hgf/parallel.hpp"
#include "hgf/pipeline.hpp"
#include "hgf/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitBlowUp = 3;

void diagnose(const std::string& level, const std::string& kind, const std::string& message) {
  hgf::Json d;
  d["level"] = level;
  d["kind"] = kind;
  d["message"] = message;
  std::cerr << d.dump() << '\n';
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const hgf::ScenarioError& e) {
    diagnose("error", "ScenarioError", e.what());
  } catch (const hgf::NotCertified& e) {
    diagnose("error", "NotCertified", e.what());
  } catch (const hgf::ContractViolation& e) {
    diagnose("error", "ContractViolation", e.what());
  } catch (const hgf::DomainTooSmall& e) {
    diagnose("error", "DomainTooSmall", e.what());
  } catch (const hgf::InvalidInput& e) {
    diagnose("error", "InvalidInput", e.what());
  } catch (const std::exception& e) {
    diagnose("error", "InternalError", e.what());
    return kExitInternal;
  }
  return kExitPrecondition;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic gradient flow solver"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::string> out_dir;
  int threads = 1;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run a scenario and write results");
  run->add_option("--scenario", scenario_path, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output.dir)");
  run->add_option("--threads", threads, "Worker threads for per-node loops")->check(CLI::Range(1, 256));
  run->add_option("--seed", seed, "Reserved; all pipelines are deterministic");

  auto* verify = app.add_subcommand("verify", "Convexity analysis only");
  verify->add_option("--scenario", scenario_path, "Scenario file")->required();
  verify->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 256));

  auto* list = app.add_subcommand("list-builtins", "List builtin potentials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitPrecondition;
  }
  hgf::set_thread_count(threads);

  if (list->parsed()) {
    for (const auto& b : hgf::builtin_catalogue()) std::cout << b.name << '\t' << b.description << '\n';
    return kExitOk;
  }

  if (verify->parsed()) {
    return guarded([&] {
      const hgf::Scenario s = hgf::load_scenario(scenario_path);
      const hgf::ConvexityReport r = hgf::verify_scenario(s);
      hgf::Json j = hgf::to_json(r);
      // The per-sample arrays are in report.json after a run; keep stdout short.
      j.erase("sampled_points");
      j.erase("min_eigenvalue");
      std::cout << j.dump(1) << '\n';
      return r.verdict == hgf::Verdict::BlowUpExpected ? kExitBlowUp : kExitOk;
    });
  }

  return guarded([&] {
    const hgf::Scenario s = hgf::load_scenario(scenario_path);
    const std::string dir = out_dir.value_or(s.output_dir);
    const hgf::Json manifest = hgf::run_scenario(s, dir);
    const auto bad = hgf::verify_manifest(dir);
    if (!bad.empty()) {
      diagnose("error", "ManifestMismatch", "digest mismatch for " + bad.front());
      return kExitInternal;
    }
    hgf::Json done;
    done["level"] = "info";
    done["kind"] = "RunComplete";
    done["out"] = dir;
    done["files"] = manifest.at("files").size();
    std::cerr << done.dump() << '\n';
    return kExitOk;
  });
}
