#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "microtrap/beam_optics.hpp"
#include "microtrap/loading_detection.hpp"
#include "microtrap/qubit_dynamics.hpp"
#include "microtrap/register_geometry.hpp"
#include "microtrap/rydberg.hpp"
#include "microtrap/trap_physics.hpp"

namespace microtrap {

enum class ExperimentKind {
  TrapCharacterization,
  LoadingDetection,
  RamseyEcho,
  ShiftRegisterEcho,
  CheckerboardAddressing,
  RydbergFeasibility,
};

const char* experiment_kind_name(ExperimentKind kind);
std::optional<ExperimentKind> experiment_kind_from_name(
    const std::string& name);
std::vector<std::string> experiment_kind_names();

// Kinds driven by Monte-Carlo draws require a seed in the scenario file.
bool experiment_is_stochastic(ExperimentKind kind);

/**
 * One check against a summary scalar: either a target value with exactly one
 * of rel_tol / abs_tol, or an interval given by min and/or max.
 */
struct Expectation {
  std::string name;
  std::optional<double> value;
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
  std::optional<double> min;
  std::optional<double> max;
};

struct ExpectationResult {
  std::string name;
  double observed = 0.0;
  bool passed = false;
  std::string detail;
};

struct TrapSection {
  std::string species_file;  // absolute path after parsing
  TrapLaserSpec laser;
};

struct GridSection {
  LensArraySpec spec;
  std::optional<double> illumination_waist;  // m, at the lens array
};

struct LoadingSection {
  LoadingMode mode;
};

struct DetectionSection {
  DetectionModel model;
  double histogram_bin_width = 25.0;  // a.u.
};

struct CoherenceSection {
  DephasingModel model;
  double rabi_frequency = 0.0;  // rad/s
};

struct RamseySection {
  std::vector<double> times;       // s
  double analysis_detuning = 0.0;  // rad/s
};

struct EchoSection {
  std::vector<double> times;  // s
};

struct MaskSection {
  PatternKind pattern;
};

struct ShiftSection {
  double pitch = 0.0;          // m
  double move_duration = 0.0;  // s
  int cycles = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  int filled_columns = 0;  // columns 0..filled-1 start with one atom each
  double loss_per_cycle = 0.0;
  double transport_dephasing_rate = 0.0;  // 1/s
  std::string species_file;               // absolute path after parsing
  double context_waist = 0.0;             // m
  double context_depth = 0.0;             // J
  double eta = 0.1;
};

struct NamedBlockade {
  std::string label;
  BlockadeConfig config;
};

struct RydbergSection {
  std::vector<NamedBlockade> configurations;
  double resolution_factor = kResolutionFactor;
  std::optional<double> target_fidelity;
};

/**
 * A parsed and validated experiment description. Only the sections relevant
 * to `kind` are populated; relative paths in the file are resolved against
 * the file's directory.
 */
struct Scenario {
  ExperimentKind kind = ExperimentKind::TrapCharacterization;
  std::string name;
  std::optional<std::uint64_t> seed;
  std::string output_dir;  // optional; relative to the working directory
  std::vector<Expectation> expectations;
  std::filesystem::path base_dir;

  std::optional<TrapSection> trap;
  std::optional<GridSection> grid;
  std::optional<LoadingSection> loading;
  std::optional<DetectionSection> detection;
  std::optional<CoherenceSection> coherence;
  std::optional<RamseySection> ramsey;
  std::optional<EchoSection> echo;
  std::optional<MaskSection> mask;
  std::optional<ShiftSection> shift;
  std::optional<RydbergSection> rydberg;
};

// Carries every validation problem found in a scenario file, each prefixed
// with the offending field path.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

// Reads and validates a JSON scenario file, reporting all errors at once.
Scenario parse_scenario(const std::filesystem::path& path);

struct RunOptions {
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::uint64_t> seed;
};

struct RunSummary {
  std::string scenario_name;
  std::string kind;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> scalars;  // insertion order
  std::vector<ExpectationResult> expectations;
  std::vector<std::string> files;  // data files written, relative names

  double scalar(const std::string& name) const;  // throws std::out_of_range
  bool has_scalar(const std::string& name) const;
  bool all_passed() const;
};

// Executes the scenario, writes CSV data files plus summary.json into the
// output directory, and evaluates every expectation. Identical inputs give
// byte-identical outputs.
RunSummary run_scenario(const Scenario& scenario,
                        const RunOptions& options = {});

// One line per scenario file in the directory, sorted by filename.
std::string list_scenarios(const std::filesystem::path& directory);

// Human-readable field schema of one experiment kind. Throws
// std::invalid_argument for unknown kinds, naming the allowed ones.
std::string describe_experiment(const std::string& kind_name);

}  // namespace microtrap
