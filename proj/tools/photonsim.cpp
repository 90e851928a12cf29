// Command-line scenario runner.
//
//   photonsim run <scenario.json> [--out DIR] [--seed U64] [--quadrature-nodes N]
//   photonsim run --preset fig2a  [--fixtures DIR] ...
//
// Exit codes: 0 success, 1 parse/validation error, 2 numerical error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "photonsim/common.hpp"
#include "photonsim/scenario.hpp"

namespace fs = std::filesystem;

#ifndef PHOTONSIM_DEFAULT_FIXTURES
#define PHOTONSIM_DEFAULT_FIXTURES ""
#endif

namespace {

fs::path default_fixtures_dir() {
  if (const char* env = std::getenv("PHOTONSIM_FIXTURES")) return fs::path(env);
  return fs::path(PHOTONSIM_DEFAULT_FIXTURES);
}

int write_outputs(const photonsim::scenario::RunResult& result, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  for (const auto& file : result.files) {
    const fs::path target = out_dir / file.name;
    std::ofstream out(target, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << target << "\n";
      return 1;
    }
    out << file.contents;
    std::cout << target.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polarization decoherence and control simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a scenario file and write its outputs");
  std::string scenario_file;
  std::string preset;
  std::string out_dir = ".";
  std::string fixtures_dir = default_fixtures_dir().string();
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t nodes = 0;

  run->add_option("scenario", scenario_file, "path to a scenario JSON file");
  run->add_option("--preset", preset, "named scenario from the fixtures directory");
  run->add_option("--out", out_dir, "output directory (default: current)");
  run->add_option("--fixtures", fixtures_dir, "fixtures directory for --preset");
  run->add_option("--seed", seed, "override the scenario RNG seed")
      ->each([&seed_given](const std::string&) { seed_given = true; });
  run->add_option("--quadrature-nodes", nodes, "override the quadrature node budget");

  CLI11_PARSE(app, argc, argv);

  if (scenario_file.empty() == preset.empty()) {
    std::cerr << "error: pass exactly one of <scenario> or --preset\n";
    return 1;
  }

  fs::path path;
  if (!preset.empty()) {
    if (fixtures_dir.empty()) {
      std::cerr << "error: no fixtures directory known; pass --fixtures or set "
                   "PHOTONSIM_FIXTURES\n";
      return 1;
    }
    path = fs::path(fixtures_dir) / (preset + ".json");
  } else {
    path = scenario_file;
  }

  photonsim::scenario::RunOptions options;
  if (seed_given) options.seed = seed;
  if (nodes > 0) options.quadrature_nodes = nodes;

  try {
    const auto result = photonsim::scenario::run_file(path, options);
    return write_outputs(result, out_dir);
  } catch (const photonsim::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const photonsim::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const photonsim::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  }
}
