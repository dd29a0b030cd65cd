// semicyclic run <scenario> [--out DIR] [--seed N] [--iters N]
//
// Exit status: 0 when every configured check passes, 2 when a check fails,
// 1 on any error.

#include "semicyclic/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Audit and iterate semi-cyclic impulsive maps described by scenario files"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> iterations;

  auto* run = app.add_subcommand("run", "Run a scenario and write its report");
  run->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (default: next to the scenario)");
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--iters", iterations, "Override the orbit length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto config = semicyclic::load_scenario(scenario_path);
    const auto report = semicyclic::run_scenario(config, {seed, iterations});
    const std::filesystem::path dir =
        out_dir.empty() ? std::filesystem::absolute(scenario_path).parent_path() : std::filesystem::path(out_dir);
    const auto written = semicyclic::emit_report(report, dir, config.name);

    for (const auto& check : report.checks) {
      std::cout << (check.passed ? "pass " : "FAIL ") << check.name << " (observed " << check.observed.dump()
                << ")\n";
    }
    std::cout << "report: " << written.string() << "\n";
    return report.passed ? 0 : 2;
  } catch (const semicyclic::ScenarioError& e) {
    std::cerr << "error: " << scenario_path << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 1;
}
