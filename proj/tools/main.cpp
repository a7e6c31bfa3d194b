#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "microtrap/scenario.hpp"

namespace {

int run_command(const std::string& scenario_file,
                const std::optional<std::string>& out_dir,
                const std::optional<std::uint64_t>& seed) {
  microtrap::Scenario scenario;
  try {
    scenario = microtrap::parse_scenario(scenario_file);
  } catch (const microtrap::ScenarioError& error) {
    for (const std::string& line : error.errors())
      std::fprintf(stderr, "error: %s\n", line.c_str());
    return 1;
  }

  microtrap::RunOptions options;
  if (out_dir) options.output_dir = *out_dir;
  if (seed) options.seed = *seed;

  microtrap::RunSummary summary;
  try {
    summary = microtrap::run_scenario(scenario, options);
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 1;
  }

  std::printf("scenario: %s  [%s]\n", summary.scenario_name.c_str(),
              summary.kind.c_str());
  if (microtrap::experiment_is_stochastic(scenario.kind))
    std::printf("seed: %llu\n",
                static_cast<unsigned long long>(summary.seed));
  for (const auto& [name, value] : summary.scalars)
    std::printf("  %-36s %.12g\n", name.c_str(), value);
  for (const std::string& file : summary.files)
    std::printf("wrote %s\n", file.c_str());
  std::printf("wrote summary.json\n");

  if (!summary.expectations.empty()) {
    std::printf("expectations:\n");
    for (const microtrap::ExpectationResult& result : summary.expectations)
      std::printf("  [%s] %s: %s\n", result.passed ? "PASS" : "FAIL",
                  result.name.c_str(), result.detail.c_str());
  }
  return summary.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"microlens trap register simulator"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  CLI::App* run = app.add_subcommand("run", "execute a scenario file");
  run->add_option("scenario", scenario_file, "path to a scenario JSON file")
      ->required();
  run->add_option("--out", out_dir, "output directory override");
  run->add_option("--seed", seed, "random seed override");

  std::string list_dir = MICROTRAP_DEFAULT_SCENARIO_DIR;
  CLI::App* list = app.add_subcommand("list", "list available scenarios");
  list->add_option("--dir", list_dir, "scenario directory");

  std::string kind_name;
  CLI::App* describe =
      app.add_subcommand("describe", "print the fields of an experiment kind");
  describe->add_option("kind", kind_name, "experiment kind name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(scenario_file, out_dir, seed);
    if (list->parsed()) {
      std::fputs(microtrap::list_scenarios(list_dir).c_str(), stdout);
      return 0;
    }
    if (describe->parsed()) {
      std::fputs(microtrap::describe_experiment(kind_name).c_str(), stdout);
      return 0;
    }
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 1;
  }
  return 0;
}
