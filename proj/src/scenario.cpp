#include "microtrap/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "microtrap/constants.hpp"
#include "microtrap/rng.hpp"
#include "microtrap/shift_register.hpp"
#include "microtrap/species.hpp"

namespace microtrap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kRamseyStream = 101;
constexpr std::uint64_t kEchoStream = 102;
constexpr std::uint64_t kCycleStream = 201;
constexpr std::uint64_t kShiftEchoStream = 202;

// Shortest round-trip decimal form; the same double always prints the same
// bytes, which keeps reruns byte-identical.
std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 40> buffer{};
  const auto result =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

// ---------------------------------------------------------------------------
// Parsing

// Accumulates every problem instead of stopping at the first.
struct ParseContext {
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& message) {
    errors.push_back(path + ": " + message);
  }
};

std::string join_path(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

const json* get_object(ParseContext& ctx, const json& parent,
                       const std::string& prefix, const std::string& key,
                       bool required) {
  if (!parent.contains(key)) {
    if (required) ctx.fail(join_path(prefix, key), "required section missing");
    return nullptr;
  }
  const json& node = parent.at(key);
  if (!node.is_object()) {
    ctx.fail(join_path(prefix, key), "must be an object");
    return nullptr;
  }
  return &node;
}

std::optional<double> get_number(ParseContext& ctx, const json& parent,
                                 const std::string& prefix,
                                 const std::string& key, bool required) {
  if (!parent.contains(key)) {
    if (required) ctx.fail(join_path(prefix, key), "required number missing");
    return std::nullopt;
  }
  const json& node = parent.at(key);
  if (!node.is_number()) {
    ctx.fail(join_path(prefix, key), "must be a number");
    return std::nullopt;
  }
  return node.get<double>();
}

std::optional<double> get_positive(ParseContext& ctx, const json& parent,
                                   const std::string& prefix,
                                   const std::string& key, bool required) {
  const std::optional<double> value =
      get_number(ctx, parent, prefix, key, required);
  if (!value) return std::nullopt;
  if (!(*value > 0.0) || !std::isfinite(*value)) {
    ctx.fail(join_path(prefix, key), "must be positive and finite");
    return std::nullopt;
  }
  return value;
}

std::optional<double> get_non_negative(ParseContext& ctx, const json& parent,
                                       const std::string& prefix,
                                       const std::string& key, bool required) {
  const std::optional<double> value =
      get_number(ctx, parent, prefix, key, required);
  if (!value) return std::nullopt;
  if (!(*value >= 0.0) || !std::isfinite(*value)) {
    ctx.fail(join_path(prefix, key), "must be non-negative and finite");
    return std::nullopt;
  }
  return value;
}

std::optional<std::string> get_string(ParseContext& ctx, const json& parent,
                                      const std::string& prefix,
                                      const std::string& key, bool required) {
  if (!parent.contains(key)) {
    if (required) ctx.fail(join_path(prefix, key), "required string missing");
    return std::nullopt;
  }
  const json& node = parent.at(key);
  if (!node.is_string() || node.get<std::string>().empty()) {
    ctx.fail(join_path(prefix, key), "must be a non-empty string");
    return std::nullopt;
  }
  return node.get<std::string>();
}

std::optional<std::size_t> get_count(ParseContext& ctx, const json& parent,
                                     const std::string& prefix,
                                     const std::string& key, bool required) {
  if (!parent.contains(key)) {
    if (required) ctx.fail(join_path(prefix, key), "required integer missing");
    return std::nullopt;
  }
  const json& node = parent.at(key);
  if (!node.is_number_integer() || node.get<long long>() < 0) {
    ctx.fail(join_path(prefix, key), "must be a non-negative integer");
    return std::nullopt;
  }
  return static_cast<std::size_t>(node.get<long long>());
}

// A time grid is either an explicit array of seconds or
// {"start": a, "stop": b, "count": n} expanded to a linear grid.
std::vector<double> get_time_grid(ParseContext& ctx, const json& parent,
                                  const std::string& prefix,
                                  const std::string& key,
                                  std::size_t min_count) {
  const std::string path = join_path(prefix, key);
  if (!parent.contains(key)) {
    ctx.fail(path, "required time grid missing");
    return {};
  }
  const json& node = parent.at(key);
  std::vector<double> times;
  if (node.is_array()) {
    for (const json& entry : node) {
      if (!entry.is_number() || !(entry.get<double>() >= 0.0) ||
          !std::isfinite(entry.get<double>())) {
        ctx.fail(path, "entries must be non-negative finite numbers");
        return {};
      }
      times.push_back(entry.get<double>());
    }
  } else if (node.is_object()) {
    const std::optional<double> start =
        get_non_negative(ctx, node, path, "start", true);
    const std::optional<double> stop =
        get_positive(ctx, node, path, "stop", true);
    const std::optional<std::size_t> count =
        get_count(ctx, node, path, "count", true);
    if (!start || !stop || !count) return {};
    if (!(*stop > *start)) {
      ctx.fail(path, "stop must exceed start");
      return {};
    }
    if (*count < 2) {
      ctx.fail(path, "count must be at least 2");
      return {};
    }
    for (std::size_t i = 0; i < *count; ++i)
      times.push_back(*start + (*stop - *start) * static_cast<double>(i) /
                                   static_cast<double>(*count - 1));
  } else {
    ctx.fail(path, "must be an array of seconds or {start, stop, count}");
    return {};
  }
  if (times.size() < min_count) {
    std::ostringstream message;
    message << "needs at least " << min_count << " samples";
    ctx.fail(path, message.str());
    return {};
  }
  return times;
}

std::string resolve_path(const fs::path& base_dir, const std::string& value) {
  fs::path p(value);
  if (p.is_relative()) p = base_dir / p;
  return p.lexically_normal().string();
}

void parse_trap(ParseContext& ctx, const json& root, const fs::path& base_dir,
                Scenario& scenario) {
  TrapSection section;
  const std::optional<std::string> species =
      get_string(ctx, root, "", "species_file", true);
  if (species) section.species_file = resolve_path(base_dir, *species);
  if (const json* trap = get_object(ctx, root, "", "trap", true)) {
    const auto wavelength = get_positive(ctx, *trap, "trap", "wavelength", true);
    const auto power =
        get_non_negative(ctx, *trap, "trap", "power_per_site", true);
    const auto waist = get_positive(ctx, *trap, "trap", "waist", true);
    if (wavelength) section.laser.wavelength = *wavelength;
    if (power) section.laser.power_per_site = *power;
    if (waist) section.laser.waist = *waist;
  }
  scenario.trap = std::move(section);
}

void parse_grid(ParseContext& ctx, const json& root, Scenario& scenario) {
  const json* grid = get_object(ctx, root, "", "grid", true);
  if (!grid) return;
  GridSection section;
  const auto rows = get_count(ctx, *grid, "grid", "rows", true);
  const auto cols = get_count(ctx, *grid, "grid", "cols", true);
  const auto pitch = get_positive(ctx, *grid, "grid", "pitch", true);
  const auto na = get_positive(ctx, *grid, "grid", "numerical_aperture", true);
  if (rows) section.spec.rows = *rows;
  if (cols) section.spec.cols = *cols;
  if ((rows && *rows == 0) || (cols && *cols == 0))
    ctx.fail("grid", "rows and cols must be at least 1");
  if (pitch) section.spec.pitch = *pitch;
  if (na) {
    if (*na >= 1.0)
      ctx.fail("grid.numerical_aperture", "must lie in (0, 1)");
    else
      section.spec.numerical_aperture = *na;
  }
  if (grid->contains("demagnification")) {
    const auto demag =
        get_positive(ctx, *grid, "grid", "demagnification", false);
    if (demag) section.spec.demagnification = *demag;
  }
  if (grid->contains("illumination_waist"))
    section.illumination_waist =
        get_positive(ctx, *grid, "grid", "illumination_waist", false);
  scenario.grid = std::move(section);
}

void parse_loading(ParseContext& ctx, const json& root, Scenario& scenario) {
  const json* loading = get_object(ctx, root, "", "loading", true);
  if (!loading) return;
  LoadingSection section;
  const std::optional<std::string> mode =
      get_string(ctx, *loading, "loading", "mode", true);
  if (!mode) return;
  if (*mode == "poisson") {
    const auto mean = get_positive(ctx, *loading, "loading", "mean", true);
    if (mean) section.mode = LoadingMode::poisson(*mean);
  } else if (*mode == "collisional_blockade") {
    section.mode = LoadingMode::collisional_blockade();
  } else if (*mode == "optimized") {
    section.mode = LoadingMode::optimized();
  } else {
    ctx.fail("loading.mode",
             "unknown mode '" + *mode +
                 "' (allowed: poisson, collisional_blockade, optimized)");
    return;
  }
  scenario.loading = std::move(section);
}

void parse_detection(ParseContext& ctx, const json& root, Scenario& scenario) {
  DetectionSection section;  // defaults reproduce the 300/700/1100 levels
  if (const json* detection = get_object(ctx, root, "", "detection", false)) {
    if (detection->contains("background")) {
      const auto value =
          get_non_negative(ctx, *detection, "detection", "background", false);
      if (value) section.model.background = *value;
    }
    if (detection->contains("per_atom")) {
      const auto value =
          get_positive(ctx, *detection, "detection", "per_atom", false);
      if (value) section.model.per_atom = *value;
    }
    if (detection->contains("noise_sigma")) {
      const auto value =
          get_non_negative(ctx, *detection, "detection", "noise_sigma", false);
      if (value) section.model.noise_sigma = *value;
    }
    if (detection->contains("histogram_bin_width")) {
      const auto value = get_positive(ctx, *detection, "detection",
                                      "histogram_bin_width", false);
      if (value) section.histogram_bin_width = *value;
    }
  }
  scenario.detection = std::move(section);
}

void parse_coherence(ParseContext& ctx, const json& root, Scenario& scenario) {
  const json* coherence = get_object(ctx, root, "", "coherence", true);
  if (!coherence) return;
  CoherenceSection section;
  const auto rabi =
      get_positive(ctx, *coherence, "coherence", "rabi_frequency", true);
  if (rabi) section.rabi_frequency = *rabi;
  if (coherence->contains("t2_star")) {
    const auto value =
        get_positive(ctx, *coherence, "coherence", "t2_star", false);
    if (value) section.model.t2_star = *value;
  }
  if (coherence->contains("t2_prime")) {
    const auto value =
        get_positive(ctx, *coherence, "coherence", "t2_prime", false);
    if (value) section.model.t2_prime = *value;
  }
  if (coherence->contains("ensemble_size")) {
    const auto value =
        get_count(ctx, *coherence, "coherence", "ensemble_size", false);
    if (value) {
      if (*value == 0)
        ctx.fail("coherence.ensemble_size", "must be at least 1");
      else
        section.model.ensemble_size = *value;
    }
  }
  scenario.coherence = std::move(section);
}

void parse_ramsey(ParseContext& ctx, const json& root, Scenario& scenario,
                  bool require_detuning) {
  const json* ramsey = get_object(ctx, root, "", "ramsey", true);
  if (!ramsey) return;
  RamseySection section;
  section.times = get_time_grid(ctx, *ramsey, "ramsey", "times", 3);
  const auto detuning =
      get_number(ctx, *ramsey, "ramsey", "analysis_detuning", true);
  if (detuning) {
    if (!std::isfinite(*detuning))
      ctx.fail("ramsey.analysis_detuning", "must be finite");
    else if (require_detuning && *detuning == 0.0)
      ctx.fail("ramsey.analysis_detuning",
               "must be nonzero to fit fringe phases");
    else
      section.analysis_detuning = *detuning;
  }
  scenario.ramsey = std::move(section);
}

void parse_echo(ParseContext& ctx, const json& root, Scenario& scenario) {
  const json* echo = get_object(ctx, root, "", "echo", true);
  if (!echo) return;
  EchoSection section;
  section.times = get_time_grid(ctx, *echo, "echo", "times", 3);
  scenario.echo = std::move(section);
}

void parse_mask(ParseContext& ctx, const json& root, Scenario& scenario) {
  const json* mask = get_object(ctx, root, "", "mask", true);
  if (!mask) return;
  const std::optional<std::string> pattern =
      get_string(ctx, *mask, "mask", "pattern", true);
  if (!pattern) return;
  MaskSection section;
  if (*pattern == "full") {
    section.pattern = PatternKind::full();
  } else if (*pattern == "checkerboard") {
    section.pattern = PatternKind::checkerboard();
  } else if (*pattern == "superlattice") {
    const auto period = get_count(ctx, *mask, "mask", "period", true);
    if (!period || *period == 0) {
      ctx.fail("mask.period", "must be at least 1");
      return;
    }
    std::size_t row_offset = 0;
    std::size_t col_offset = 0;
    if (mask->contains("row_offset"))
      row_offset = get_count(ctx, *mask, "mask", "row_offset", false).value_or(0);
    if (mask->contains("col_offset"))
      col_offset = get_count(ctx, *mask, "mask", "col_offset", false).value_or(0);
    section.pattern = PatternKind::superlattice(*period, row_offset, col_offset);
  } else if (*pattern == "blocks") {
    const auto block_rows = get_count(ctx, *mask, "mask", "block_rows", true);
    const auto block_cols = get_count(ctx, *mask, "mask", "block_cols", true);
    const auto gap = get_count(ctx, *mask, "mask", "gap", true);
    if (!block_rows || !block_cols || !gap) return;
    section.pattern = PatternKind::blocks(*block_rows, *block_cols, *gap);
  } else if (*pattern == "ring") {
    const auto radius = get_positive(ctx, *mask, "mask", "radius", true);
    if (!radius) return;
    section.pattern = PatternKind::ring(*radius);
  } else {
    ctx.fail("mask.pattern",
             "unknown pattern '" + *pattern +
                 "' (allowed: full, superlattice, blocks, ring, checkerboard)");
    return;
  }
  scenario.mask = std::move(section);
}

void parse_shift(ParseContext& ctx, const json& root, const fs::path& base_dir,
                 Scenario& scenario) {
  const json* shift = get_object(ctx, root, "", "shift", true);
  if (!shift) return;
  ShiftSection section;
  const auto pitch = get_positive(ctx, *shift, "shift", "pitch", true);
  const auto move_duration =
      get_positive(ctx, *shift, "shift", "move_duration", true);
  const auto cycles = get_count(ctx, *shift, "shift", "cycles", true);
  const auto rows = get_count(ctx, *shift, "shift", "rows", true);
  const auto cols = get_count(ctx, *shift, "shift", "cols", true);
  const auto filled = get_count(ctx, *shift, "shift", "filled_columns", true);
  const std::optional<std::string> species =
      get_string(ctx, *shift, "shift", "species_file", true);
  const auto waist = get_positive(ctx, *shift, "shift", "context_waist", true);
  const auto depth = get_positive(ctx, *shift, "shift", "context_depth", true);
  if (pitch) section.pitch = *pitch;
  if (move_duration) section.move_duration = *move_duration;
  if (cycles) section.cycles = static_cast<int>(*cycles);
  if (rows && cols) {
    if (*rows == 0 || *cols == 0) {
      ctx.fail("shift", "rows and cols must be at least 1");
    } else {
      section.rows = *rows;
      section.cols = *cols;
    }
  }
  if (filled) {
    section.filled_columns = static_cast<int>(*filled);
    if (cols && *filled > *cols)
      ctx.fail("shift.filled_columns", "cannot exceed cols");
  }
  if (species) section.species_file = resolve_path(base_dir, *species);
  if (waist) section.context_waist = *waist;
  if (depth) section.context_depth = *depth;
  if (shift->contains("eta")) {
    const auto eta = get_positive(ctx, *shift, "shift", "eta", false);
    if (eta) section.eta = *eta;
  }
  if (shift->contains("loss_per_cycle")) {
    const auto loss =
        get_non_negative(ctx, *shift, "shift", "loss_per_cycle", false);
    if (loss) {
      if (*loss > 1.0)
        ctx.fail("shift.loss_per_cycle", "must lie in [0, 1]");
      else
        section.loss_per_cycle = *loss;
    }
  }
  if (shift->contains("transport_dephasing_rate")) {
    const auto rate = get_non_negative(ctx, *shift, "shift",
                                       "transport_dephasing_rate", false);
    if (rate) section.transport_dephasing_rate = *rate;
  }
  scenario.shift = std::move(section);
}

void parse_rydberg(ParseContext& ctx, const json& root, Scenario& scenario) {
  const json* blockade = get_object(ctx, root, "", "blockade", true);
  if (!blockade) return;
  RydbergSection section;
  if (blockade->contains("resolution_factor")) {
    const auto factor =
        get_positive(ctx, *blockade, "blockade", "resolution_factor", false);
    if (factor) section.resolution_factor = *factor;
  }
  if (blockade->contains("target_fidelity")) {
    const auto target =
        get_positive(ctx, *blockade, "blockade", "target_fidelity", false);
    if (target) {
      if (*target >= 1.0)
        ctx.fail("blockade.target_fidelity", "must lie in (0, 1)");
      else
        section.target_fidelity = *target;
    }
  }
  if (!blockade->contains("configurations") ||
      !blockade->at("configurations").is_array() ||
      blockade->at("configurations").empty()) {
    ctx.fail("blockade.configurations", "must be a non-empty array");
    return;
  }
  std::size_t index = 0;
  for (const json& entry : blockade->at("configurations")) {
    std::ostringstream prefix_stream;
    prefix_stream << "blockade.configurations[" << index << "]";
    const std::string prefix = prefix_stream.str();
    ++index;
    if (!entry.is_object()) {
      ctx.fail(prefix, "must be an object");
      continue;
    }
    NamedBlockade named;
    const std::optional<std::string> label =
        get_string(ctx, entry, prefix, "label", true);
    if (label) named.label = *label;
    const auto radius = get_positive(ctx, entry, prefix, "blockade_radius", true);
    const auto pitch = get_positive(ctx, entry, prefix, "pitch", true);
    const auto waist = get_positive(ctx, entry, prefix, "waist", true);
    if (radius) named.config.blockade_radius = *radius;
    if (pitch) named.config.pitch = *pitch;
    if (waist) named.config.waist = *waist;
    for (const char* key : {"intrinsic_error", "technical_error"}) {
      if (!entry.contains(key)) continue;
      const auto error = get_non_negative(ctx, entry, prefix, key, false);
      if (error) {
        if (*error > 1.0) {
          ctx.fail(join_path(prefix, key), "must lie in [0, 1]");
        } else if (std::string(key) == "intrinsic_error") {
          named.config.intrinsic_error = *error;
        } else {
          named.config.technical_error = *error;
        }
      }
    }
    section.configurations.push_back(std::move(named));
  }
  for (std::size_t i = 0; i < section.configurations.size(); ++i)
    for (std::size_t j = i + 1; j < section.configurations.size(); ++j)
      if (section.configurations[i].label == section.configurations[j].label)
        ctx.fail("blockade.configurations", "duplicate label '" +
                                                section.configurations[i].label +
                                                "'");
  scenario.rydberg = std::move(section);
}

void parse_expectations(ParseContext& ctx, const json& root,
                        Scenario& scenario) {
  if (!root.contains("expectations")) return;
  const json& list = root.at("expectations");
  if (!list.is_array()) {
    ctx.fail("expectations", "must be an array");
    return;
  }
  std::size_t index = 0;
  for (const json& entry : list) {
    std::ostringstream prefix_stream;
    prefix_stream << "expectations[" << index << "]";
    const std::string prefix = prefix_stream.str();
    ++index;
    if (!entry.is_object()) {
      ctx.fail(prefix, "must be an object");
      continue;
    }
    Expectation expectation;
    const std::optional<std::string> name =
        get_string(ctx, entry, prefix, "name", true);
    if (name) expectation.name = *name;
    for (const char* key : {"value", "rel_tol", "abs_tol", "min", "max"}) {
      if (!entry.contains(key)) continue;
      const auto value = get_number(ctx, entry, prefix, key, false);
      if (!value || !std::isfinite(*value)) {
        if (value) ctx.fail(join_path(prefix, key), "must be finite");
        continue;
      }
      if (std::string(key) == "value") expectation.value = *value;
      if (std::string(key) == "rel_tol") expectation.rel_tol = *value;
      if (std::string(key) == "abs_tol") expectation.abs_tol = *value;
      if (std::string(key) == "min") expectation.min = *value;
      if (std::string(key) == "max") expectation.max = *value;
    }
    if (expectation.value) {
      const bool rel = expectation.rel_tol.has_value();
      const bool abs = expectation.abs_tol.has_value();
      if (rel == abs)
        ctx.fail(prefix, "a target value needs exactly one of rel_tol/abs_tol");
      if ((rel && !(*expectation.rel_tol >= 0.0)) ||
          (abs && !(*expectation.abs_tol >= 0.0)))
        ctx.fail(prefix, "tolerances must be non-negative");
      if (expectation.min || expectation.max)
        ctx.fail(prefix, "value and min/max are mutually exclusive");
    } else {
      if (expectation.rel_tol || expectation.abs_tol)
        ctx.fail(prefix, "tolerances require a target value");
      if (!expectation.min && !expectation.max)
        ctx.fail(prefix, "needs a value with tolerance, or min and/or max");
      if (expectation.min && expectation.max &&
          !(*expectation.min <= *expectation.max))
        ctx.fail(prefix, "min must not exceed max");
    }
    scenario.expectations.push_back(std::move(expectation));
  }
}

// ---------------------------------------------------------------------------
// Output helpers

void push_scalar(RunSummary& summary, const std::string& name, double value) {
  summary.scalars.emplace_back(name, value);
}

std::ofstream open_csv(const fs::path& out_dir, const std::string& name,
                       const std::string& header, RunSummary& summary) {
  std::ofstream file(out_dir / name, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write " + (out_dir / name).string());
  file << header << "\n";
  summary.files.push_back(name);
  return file;
}

// ---------------------------------------------------------------------------
// Experiment runners

void run_trap_characterization(const Scenario& scenario, RunSummary& summary,
                               const fs::path& out_dir) {
  const TrapSection& section = *scenario.trap;
  const AtomSpecies species =
      AtomSpecies::from_json_file(section.species_file);
  const TrapCharacteristics trap = characterize_trap(section.laser, species);

  push_scalar(summary, "depth", trap.depth);
  push_scalar(summary, "depth_mK", trap.depth / (kBoltzmann * 1e-3));
  push_scalar(summary, "potential", trap.potential);
  push_scalar(summary, "peak_intensity", trap.peak_intensity);
  push_scalar(summary, "rayleigh_range", trap.rayleigh_range);
  push_scalar(summary, "effective_detuning", trap.effective_detuning);
  push_scalar(summary, "total_scattering_rate", trap.total_scattering_rate);
  push_scalar(summary, "state_changing_rate", trap.state_changing_rate);
  push_scalar(summary, "coherence_limit", trap.coherence_limit);
  push_scalar(summary, "radial_frequency", trap.radial_frequency);
  push_scalar(summary, "axial_frequency", trap.axial_frequency);
  push_scalar(summary, "radial_frequency_hz", trap.radial_frequency / kTwoPi);
  push_scalar(summary, "axial_frequency_hz", trap.axial_frequency / kTwoPi);

  GaussianBeam beam;
  beam.wavelength = section.laser.wavelength;
  beam.power = section.laser.power_per_site;
  beam.waist = section.laser.waist;

  std::ofstream axial = open_csv(out_dir, "axial_profile.csv",
                                 "z,beam_radius,intensity,potential", summary);
  const int axial_points = 81;
  for (int i = 0; i < axial_points; ++i) {
    const double z = trap.rayleigh_range *
                     (-2.0 + 4.0 * static_cast<double>(i) / (axial_points - 1));
    const double intensity = intensity_at(beam, 0.0, z);
    const double potential =
        intensity > 0.0
            ? dipole_potential(intensity, trap.effective_detuning, species)
            : 0.0;
    axial << format_double(z) << "," << format_double(beam.radius_at(z)) << ","
          << format_double(intensity) << "," << format_double(potential)
          << "\n";
  }

  std::ofstream radial = open_csv(out_dir, "radial_profile.csv",
                                  "r,intensity,potential", summary);
  const int radial_points = 51;
  for (int i = 0; i < radial_points; ++i) {
    const double r = section.laser.waist * 2.5 * static_cast<double>(i) /
                     (radial_points - 1);
    const double intensity = intensity_at(beam, r, 0.0);
    const double potential =
        intensity > 0.0
            ? dipole_potential(intensity, trap.effective_detuning, species)
            : 0.0;
    radial << format_double(r) << "," << format_double(intensity) << ","
           << format_double(potential) << "\n";
  }
}

void run_loading_detection(const Scenario& scenario, RunSummary& summary,
                           const fs::path& out_dir) {
  const SiteGrid grid =
      spot_grid(scenario.grid->spec, scenario.grid->illumination_waist);
  const RegisterState state =
      load_register(grid, scenario.loading->mode, summary.seed);
  const DetectionSection& detection = *scenario.detection;

  std::vector<int> occupancy(state.sites.size());
  for (std::size_t i = 0; i < state.sites.size(); ++i)
    occupancy[i] = state.sites[i].occupancy;

  const std::vector<double> signals =
      simulate_fluorescence(occupancy, detection.model, summary.seed);
  const DetectionRecord record = classify_counts(signals, detection.model);
  const std::vector<HistogramBin> histogram =
      signal_histogram(signals, detection.histogram_bin_width);

  const double n = static_cast<double>(occupancy.size());
  std::size_t empty = 0;
  std::size_t single = 0;
  std::size_t multi = 0;
  std::size_t wrong = 0;
  std::size_t anomalous = 0;
  long long atoms = 0;
  for (std::size_t i = 0; i < occupancy.size(); ++i) {
    atoms += occupancy[i];
    if (occupancy[i] == 0) ++empty;
    if (occupancy[i] == 1) ++single;
    if (occupancy[i] >= 2) ++multi;
    if (record.counts[i] != occupancy[i]) ++wrong;
    if (record.anomalous[i]) ++anomalous;
  }
  push_scalar(summary, "sites", n);
  push_scalar(summary, "atoms", static_cast<double>(atoms));
  push_scalar(summary, "mean_occupancy", static_cast<double>(atoms) / n);
  push_scalar(summary, "fraction_empty", static_cast<double>(empty) / n);
  push_scalar(summary, "fraction_single", static_cast<double>(single) / n);
  push_scalar(summary, "fraction_multi", static_cast<double>(multi) / n);
  push_scalar(summary, "classification_error_rate",
              static_cast<double>(wrong) / n);
  push_scalar(summary, "misclassification_oracle",
              misclassification_probability(detection.model,
                                            scenario.loading->mode));
  push_scalar(summary, "anomalous_sites", static_cast<double>(anomalous));

  std::ofstream sites =
      open_csv(out_dir, "sites.csv",
               "index,row,col,occupancy,signal,classified,anomalous", summary);
  for (std::size_t i = 0; i < state.sites.size(); ++i) {
    const Site& site = state.sites[i];
    sites << i << "," << site.row << "," << site.col << "," << site.occupancy
          << "," << format_double(signals[i]) << "," << record.counts[i] << ","
          << (record.anomalous[i] ? 1 : 0) << "\n";
  }

  std::ofstream bins =
      open_csv(out_dir, "histogram.csv", "bin_center,count", summary);
  for (const HistogramBin& bin : histogram)
    bins << format_double(bin.center) << "," << bin.count << "\n";
}

void write_sequence_csv(const fs::path& out_dir, const std::string& name,
                        const SequenceResult& sequence, RunSummary& summary) {
  std::ofstream file = open_csv(
      out_dir, name, "time,population_ground,sampled_population,contrast",
      summary);
  for (std::size_t i = 0; i < sequence.times.size(); ++i)
    file << format_double(sequence.times[i]) << ","
         << format_double(sequence.population_ground[i]) << ","
         << format_double(sequence.sampled_population[i]) << ","
         << format_double(sequence.contrast[i]) << "\n";
}

void run_ramsey_echo(const Scenario& scenario, RunSummary& summary,
                     const fs::path& out_dir) {
  const CoherenceSection& coherence = *scenario.coherence;
  const SequenceResult ramsey = ramsey_sequence(
      coherence.model, coherence.rabi_frequency, scenario.ramsey->times,
      scenario.ramsey->analysis_detuning, Rng::mix(summary.seed, kRamseyStream));
  const SequenceResult echo =
      spin_echo_sequence(coherence.model, coherence.rabi_frequency,
                         scenario.echo->times, Rng::mix(summary.seed, kEchoStream));

  std::vector<double> echo_sampled_contrast(echo.times.size());
  for (std::size_t i = 0; i < echo.times.size(); ++i)
    echo_sampled_contrast[i] = 2.0 * echo.sampled_population[i] - 1.0;
  const ContrastFit echo_fit =
      fit_contrast_decay(echo.times, echo_sampled_contrast);
  const ContrastFit echo_exact_fit =
      fit_contrast_decay(echo.times, echo.contrast);
  const ContrastFit ramsey_envelope =
      fit_contrast_decay(ramsey.times, ramsey.contrast);

  push_scalar(summary, "echo_c0_fit", echo_fit.c0);
  push_scalar(summary, "echo_t2_fit", echo_fit.t2);
  push_scalar(summary, "echo_t2_exact_fit", echo_exact_fit.t2);
  push_scalar(summary, "ramsey_envelope_time", ramsey_envelope.t2);
  if (scenario.ramsey->analysis_detuning != 0.0) {
    const FringeFit fringe =
        fit_fringe(ramsey.times, ramsey.sampled_population,
                   scenario.ramsey->analysis_detuning);
    push_scalar(summary, "fringe_offset", fringe.offset);
    push_scalar(summary, "fringe_amplitude", fringe.amplitude);
    push_scalar(summary, "fringe_phase", fringe.phase);
  }

  write_sequence_csv(out_dir, "ramsey.csv", ramsey, summary);
  write_sequence_csv(out_dir, "echo.csv", echo, summary);
}

void run_shift_register_echo(const Scenario& scenario, RunSummary& summary,
                             const fs::path& out_dir) {
  const ShiftSection& section = *scenario.shift;
  const ShiftSchedule schedule =
      default_schedule(section.pitch, section.move_duration);

  TransportContext context;
  context.mass = AtomSpecies::from_json_file(section.species_file).mass;
  context.waist = section.context_waist;
  context.trap_depth = section.context_depth;
  context.eta = section.eta;
  const std::vector<std::string> violations =
      validate_schedule(schedule, context);
  if (!violations.empty()) {
    std::string message = "shift schedule rejected:";
    for (const std::string& violation : violations)
      message += "\n  " + violation;
    throw std::invalid_argument(message);
  }

  RegisterState state;
  state.rows = section.rows;
  state.cols = section.cols;
  state.pitch = section.pitch;
  state.sites.resize(section.rows * section.cols);
  for (std::size_t row = 0; row < section.rows; ++row) {
    for (std::size_t col = 0; col < section.cols; ++col) {
      Site& site = state.sites[row * section.cols + col];
      site.row = row;
      site.col = col;
      site.position = {
          (static_cast<double>(col) -
           (static_cast<double>(section.cols) - 1.0) / 2.0) *
              section.pitch,
          (static_cast<double>(row) -
           (static_cast<double>(section.rows) - 1.0) / 2.0) *
              section.pitch,
          0.0};
      site.occupancy = col < static_cast<std::size_t>(section.filled_columns)
                           ? 1
                           : 0;
    }
  }
  const int initial_atoms = state.total_occupancy();

  LossModel loss;
  loss.loss_per_cycle = section.loss_per_cycle;

  std::ofstream transport = open_csv(
      out_dir, "transport.csv",
      "cycle,total_occupancy,displacement,atoms_lost,atoms_dropped", summary);
  transport << "0," << initial_atoms << ",0,0,0\n";

  double displacement = 0.0;
  std::int64_t lost = 0;
  std::int64_t dropped = 0;
  int shift_per_cycle = 0;
  for (int cycle = 0; cycle < section.cycles; ++cycle) {
    auto [next, result] =
        run_cycles(state, schedule, 1, loss,
                   Rng::mix(summary.seed, kCycleStream,
                            static_cast<std::uint64_t>(cycle)));
    state = std::move(next);
    displacement += result.displacement;
    lost += result.atoms_lost;
    dropped += result.atoms_dropped;
    shift_per_cycle = result.site_shift_per_cycle;
    transport << (cycle + 1) << "," << state.total_occupancy() << ","
              << format_double(displacement) << "," << lost << "," << dropped
              << "\n";
  }

  push_scalar(summary, "initial_atoms", initial_atoms);
  push_scalar(summary, "surviving_atoms", state.total_occupancy());
  push_scalar(summary, "cycles", section.cycles);
  push_scalar(summary, "site_shift_per_cycle", shift_per_cycle);
  push_scalar(summary, "displacement", displacement);
  push_scalar(summary, "displacement_in_pitches",
              displacement / section.pitch);
  push_scalar(summary, "atoms_lost", static_cast<double>(lost));
  push_scalar(summary, "atoms_dropped", static_cast<double>(dropped));

  const CoherenceSection& coherence = *scenario.coherence;
  const ShiftEchoResult echo = shift_with_echo(
      coherence.model, schedule, scenario.echo->times,
      section.transport_dephasing_rate, coherence.rabi_frequency,
      Rng::mix(summary.seed, kShiftEchoStream));
  push_scalar(summary, "t2_rest_fit", echo.rest_fit.t2);
  push_scalar(summary, "t2_shift_fit", echo.shift_fit.t2);
  push_scalar(summary, "t2_ratio", echo.ratio);
  push_scalar(summary, "rest_c0_fit", echo.rest_fit.c0);
  push_scalar(summary, "shift_c0_fit", echo.shift_fit.c0);

  std::ofstream comparison =
      open_csv(out_dir, "echo_comparison.csv",
               "time,rest_contrast,shift_contrast", summary);
  for (std::size_t i = 0; i < echo.times.size(); ++i)
    comparison << format_double(echo.times[i]) << ","
               << format_double(echo.rest_contrast[i]) << ","
               << format_double(echo.shift_contrast[i]) << "\n";
}

void run_checkerboard_addressing(const Scenario& scenario, RunSummary& summary,
                                 const fs::path& out_dir) {
  const SLMMask mask =
      build_mask(scenario.mask->pattern, scenario.grid->spec);
  const std::vector<std::size_t> addressed = addressed_sites(mask, 0.5);

  const CoherenceSection& coherence = *scenario.coherence;
  const RegisterRamseyResult result = register_ramsey(
      coherence.model, coherence.rabi_frequency, scenario.ramsey->times,
      scenario.ramsey->analysis_detuning, summary.seed);

  const FringeFit addressed_fit =
      fit_fringe(result.prepared_excited.times,
                 result.prepared_excited.sampled_population,
                 scenario.ramsey->analysis_detuning);
  const FringeFit unaddressed_fit =
      fit_fringe(result.prepared_ground.times,
                 result.prepared_ground.sampled_population,
                 scenario.ramsey->analysis_detuning);

  double max_population_sum_error = 0.0;
  for (std::size_t i = 0; i < result.prepared_excited.times.size(); ++i) {
    const double total = result.prepared_excited.population_ground[i] +
                         result.prepared_ground.population_ground[i];
    max_population_sum_error =
        std::max(max_population_sum_error, std::abs(total - 1.0));
  }

  const std::size_t total_sites =
      scenario.grid->spec.rows * scenario.grid->spec.cols;
  push_scalar(summary, "addressed_sites", static_cast<double>(addressed.size()));
  push_scalar(summary, "unaddressed_sites",
              static_cast<double>(total_sites - addressed.size()));
  push_scalar(summary, "relative_phase", result.relative_phase);
  push_scalar(summary, "relative_phase_abs", std::abs(result.relative_phase));
  push_scalar(summary, "fringe_amplitude_addressed", addressed_fit.amplitude);
  push_scalar(summary, "fringe_amplitude_unaddressed",
              unaddressed_fit.amplitude);
  push_scalar(summary, "population_sum_error", max_population_sum_error);

  std::ofstream fringes = open_csv(
      out_dir, "fringes.csv",
      "time,addressed_population,addressed_sampled,unaddressed_population,"
      "unaddressed_sampled",
      summary);
  for (std::size_t i = 0; i < result.prepared_excited.times.size(); ++i)
    fringes << format_double(result.prepared_excited.times[i]) << ","
            << format_double(result.prepared_excited.population_ground[i])
            << ","
            << format_double(result.prepared_excited.sampled_population[i])
            << ","
            << format_double(result.prepared_ground.population_ground[i])
            << ","
            << format_double(result.prepared_ground.sampled_population[i])
            << "\n";

  std::ofstream mask_csv =
      open_csv(out_dir, "mask.csv", "row,col,transmission,addressed", summary);
  for (std::size_t row = 0; row < mask.rows; ++row)
    for (std::size_t col = 0; col < mask.cols; ++col)
      mask_csv << row << "," << col << ","
               << format_double(mask.at(row, col)) << ","
               << (mask.at(row, col) >= 0.5 ? 1 : 0) << "\n";
}

void run_rydberg_feasibility(const Scenario& scenario, RunSummary& summary,
                             const fs::path& out_dir) {
  const RydbergSection& section = *scenario.rydberg;
  std::ofstream report = open_csv(
      out_dir, "feasibility.csv",
      "label,blockade_radius,pitch,waist,pair_within_blockade,sites_resolved,"
      "compatible,intrinsic_fidelity,total_fidelity,solved_technical_error",
      summary);
  for (const NamedBlockade& named : section.configurations) {
    const GeometryReport geometry =
        geometry_compatible(named.config, section.resolution_factor);
    const FidelityBudget budget = gate_fidelity_budget(named.config);
    double solved = std::numeric_limits<double>::quiet_NaN();
    if (section.target_fidelity)
      solved = solve_technical_error(named.config, *section.target_fidelity);

    const std::string prefix = named.label + ".";
    push_scalar(summary, prefix + "pair_within_blockade",
                geometry.pair_within_blockade ? 1.0 : 0.0);
    push_scalar(summary, prefix + "sites_resolved",
                geometry.sites_resolved ? 1.0 : 0.0);
    push_scalar(summary, prefix + "compatible",
                geometry.compatible() ? 1.0 : 0.0);
    push_scalar(summary, prefix + "intrinsic_fidelity",
                budget.intrinsic_fidelity);
    push_scalar(summary, prefix + "total_fidelity", budget.total_fidelity);
    if (section.target_fidelity)
      push_scalar(summary, prefix + "solved_technical_error", solved);

    report << named.label << "," << format_double(named.config.blockade_radius)
           << "," << format_double(named.config.pitch) << ","
           << format_double(named.config.waist) << ","
           << (geometry.pair_within_blockade ? 1 : 0) << ","
           << (geometry.sites_resolved ? 1 : 0) << ","
           << (geometry.compatible() ? 1 : 0) << ","
           << format_double(budget.intrinsic_fidelity) << ","
           << format_double(budget.total_fidelity) << ","
           << format_double(solved) << "\n";
  }
}

ExpectationResult check_expectation(const Expectation& expectation,
                                    const RunSummary& summary) {
  ExpectationResult result;
  result.name = expectation.name;
  if (!summary.has_scalar(expectation.name)) {
    result.observed = std::numeric_limits<double>::quiet_NaN();
    result.passed = false;
    result.detail = "summary has no such scalar";
    return result;
  }
  const double observed = summary.scalar(expectation.name);
  result.observed = observed;
  std::ostringstream detail;
  if (expectation.value) {
    const double tolerance =
        expectation.rel_tol ? *expectation.rel_tol * std::abs(*expectation.value)
                            : *expectation.abs_tol;
    result.passed = std::abs(observed - *expectation.value) <= tolerance;
    detail << "observed " << format_double(observed) << ", target "
           << format_double(*expectation.value) << " +/- "
           << format_double(tolerance);
  } else {
    bool ok = true;
    if (expectation.min && !(observed >= *expectation.min)) ok = false;
    if (expectation.max && !(observed <= *expectation.max)) ok = false;
    result.passed = ok;
    detail << "observed " << format_double(observed) << ", range ["
           << (expectation.min ? format_double(*expectation.min) : "-inf")
           << ", "
           << (expectation.max ? format_double(*expectation.max) : "inf")
           << "]";
  }
  result.detail = detail.str();
  return result;
}

void write_summary_json(const Scenario& scenario, const RunSummary& summary,
                        const fs::path& out_dir) {
  json doc;
  doc["scenario"] = summary.scenario_name;
  doc["kind"] = summary.kind;
  if (experiment_is_stochastic(scenario.kind)) doc["seed"] = summary.seed;
  json scalars = json::object();
  for (const auto& [name, value] : summary.scalars) {
    if (std::isfinite(value))
      scalars[name] = value;
    else
      scalars[name] = format_double(value);
  }
  doc["scalars"] = std::move(scalars);
  json expectations = json::array();
  for (const ExpectationResult& result : summary.expectations) {
    json entry;
    entry["name"] = result.name;
    entry["observed"] = std::isfinite(result.observed)
                            ? json(result.observed)
                            : json(format_double(result.observed));
    entry["passed"] = result.passed;
    entry["detail"] = result.detail;
    expectations.push_back(std::move(entry));
  }
  doc["expectations"] = std::move(expectations);
  doc["files"] = summary.files;

  std::ofstream file(out_dir / "summary.json",
                     std::ios::binary | std::ios::trunc);
  if (!file)
    throw std::runtime_error("cannot write " +
                             (out_dir / "summary.json").string());
  file << doc.dump(2) << "\n";
}

}  // namespace

// ---------------------------------------------------------------------------
// Public interface

const char* experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::TrapCharacterization:
      return "trap_characterization";
    case ExperimentKind::LoadingDetection:
      return "loading_detection";
    case ExperimentKind::RamseyEcho:
      return "ramsey_echo";
    case ExperimentKind::ShiftRegisterEcho:
      return "shift_register_echo";
    case ExperimentKind::CheckerboardAddressing:
      return "checkerboard_addressing";
    case ExperimentKind::RydbergFeasibility:
      return "rydberg_feasibility";
  }
  return "unknown";
}

std::optional<ExperimentKind> experiment_kind_from_name(
    const std::string& name) {
  static const std::array<ExperimentKind, 6> kinds = {
      ExperimentKind::TrapCharacterization,
      ExperimentKind::LoadingDetection,
      ExperimentKind::RamseyEcho,
      ExperimentKind::ShiftRegisterEcho,
      ExperimentKind::CheckerboardAddressing,
      ExperimentKind::RydbergFeasibility,
  };
  for (const ExperimentKind kind : kinds)
    if (name == experiment_kind_name(kind)) return kind;
  return std::nullopt;
}

std::vector<std::string> experiment_kind_names() {
  return {"trap_characterization",   "loading_detection",
          "ramsey_echo",             "shift_register_echo",
          "checkerboard_addressing", "rydberg_feasibility"};
}

bool experiment_is_stochastic(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::TrapCharacterization:
    case ExperimentKind::RydbergFeasibility:
      return false;
    default:
      return true;
  }
}

ScenarioError::ScenarioError(std::vector<std::string> errors)
    : std::runtime_error([&errors] {
        std::string message = "scenario validation failed:";
        for (const std::string& error : errors) message += "\n  " + error;
        return message;
      }()),
      errors_(std::move(errors)) {}

Scenario parse_scenario(const fs::path& path) {
  std::ifstream file(path);
  if (!file)
    throw ScenarioError({path.string() + ": cannot open scenario file"});
  json root;
  try {
    root = json::parse(file);
  } catch (const json::parse_error& error) {
    throw ScenarioError({path.string() + ": " + error.what()});
  }
  if (!root.is_object())
    throw ScenarioError({path.string() + ": top level must be an object"});

  ParseContext ctx;
  Scenario scenario;
  scenario.base_dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  scenario.name = path.stem().string();

  const std::optional<std::string> kind_name =
      get_string(ctx, root, "", "kind", true);
  std::optional<ExperimentKind> kind;
  if (kind_name) {
    kind = experiment_kind_from_name(*kind_name);
    if (!kind) {
      std::string allowed;
      for (const std::string& name : experiment_kind_names())
        allowed += (allowed.empty() ? "" : ", ") + name;
      ctx.fail("kind", "unknown experiment kind '" + *kind_name +
                           "' (allowed: " + allowed + ")");
    }
  }

  if (root.contains("name")) {
    const auto name = get_string(ctx, root, "", "name", false);
    if (name) scenario.name = *name;
  }
  if (root.contains("output_dir")) {
    const auto dir = get_string(ctx, root, "", "output_dir", false);
    if (dir) scenario.output_dir = *dir;
  }
  if (root.contains("seed")) {
    const json& node = root.at("seed");
    if (!node.is_number_integer() || node.get<long long>() < 0)
      ctx.fail("seed", "must be a non-negative integer");
    else
      scenario.seed = node.get<std::uint64_t>();
  }

  if (kind) {
    scenario.kind = *kind;
    if (experiment_is_stochastic(*kind) && !scenario.seed)
      ctx.fail("seed", std::string("required for the stochastic kind '") +
                           experiment_kind_name(*kind) + "'");
    switch (*kind) {
      case ExperimentKind::TrapCharacterization:
        parse_trap(ctx, root, scenario.base_dir, scenario);
        break;
      case ExperimentKind::LoadingDetection:
        parse_grid(ctx, root, scenario);
        parse_loading(ctx, root, scenario);
        parse_detection(ctx, root, scenario);
        break;
      case ExperimentKind::RamseyEcho:
        parse_coherence(ctx, root, scenario);
        parse_ramsey(ctx, root, scenario, false);
        parse_echo(ctx, root, scenario);
        break;
      case ExperimentKind::ShiftRegisterEcho:
        parse_shift(ctx, root, scenario.base_dir, scenario);
        parse_coherence(ctx, root, scenario);
        parse_echo(ctx, root, scenario);
        break;
      case ExperimentKind::CheckerboardAddressing:
        parse_grid(ctx, root, scenario);
        parse_mask(ctx, root, scenario);
        parse_coherence(ctx, root, scenario);
        parse_ramsey(ctx, root, scenario, true);
        break;
      case ExperimentKind::RydbergFeasibility:
        parse_rydberg(ctx, root, scenario);
        break;
    }
  }

  parse_expectations(ctx, root, scenario);

  if (!ctx.errors.empty()) throw ScenarioError(std::move(ctx.errors));
  return scenario;
}

double RunSummary::scalar(const std::string& name) const {
  for (const auto& [key, value] : scalars)
    if (key == name) return value;
  throw std::out_of_range("no summary scalar named '" + name + "'");
}

bool RunSummary::has_scalar(const std::string& name) const {
  for (const auto& [key, value] : scalars)
    if (key == name) return true;
  return false;
}

bool RunSummary::all_passed() const {
  for (const ExpectationResult& result : expectations)
    if (!result.passed) return false;
  return true;
}

RunSummary run_scenario(const Scenario& scenario, const RunOptions& options) {
  RunSummary summary;
  summary.scenario_name = scenario.name;
  summary.kind = experiment_kind_name(scenario.kind);
  summary.seed =
      options.seed ? *options.seed : scenario.seed.value_or(0);

  fs::path out_dir;
  if (options.output_dir)
    out_dir = *options.output_dir;
  else if (!scenario.output_dir.empty())
    out_dir = scenario.output_dir;
  else
    out_dir = fs::path("out") / scenario.name;
  fs::create_directories(out_dir);

  switch (scenario.kind) {
    case ExperimentKind::TrapCharacterization:
      run_trap_characterization(scenario, summary, out_dir);
      break;
    case ExperimentKind::LoadingDetection:
      run_loading_detection(scenario, summary, out_dir);
      break;
    case ExperimentKind::RamseyEcho:
      run_ramsey_echo(scenario, summary, out_dir);
      break;
    case ExperimentKind::ShiftRegisterEcho:
      run_shift_register_echo(scenario, summary, out_dir);
      break;
    case ExperimentKind::CheckerboardAddressing:
      run_checkerboard_addressing(scenario, summary, out_dir);
      break;
    case ExperimentKind::RydbergFeasibility:
      run_rydberg_feasibility(scenario, summary, out_dir);
      break;
  }

  for (const Expectation& expectation : scenario.expectations)
    summary.expectations.push_back(check_expectation(expectation, summary));

  write_summary_json(scenario, summary, out_dir);
  return summary;
}

std::string list_scenarios(const fs::path& directory) {
  if (!fs::is_directory(directory))
    throw std::invalid_argument("scenario directory not found: " +
                                directory.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::ostringstream out;
  for (const fs::path& file : files) {
    try {
      const Scenario scenario = parse_scenario(file);
      out << scenario.name << "  [" << experiment_kind_name(scenario.kind)
          << "]  " << file.filename().string() << "\n";
    } catch (const ScenarioError& error) {
      out << file.filename().string() << "  INVALID ("
          << error.errors().size() << " errors)\n";
    }
  }
  if (out.str().empty()) return "no scenarios found\n";
  return out.str();
}

std::string describe_experiment(const std::string& kind_name) {
  const std::optional<ExperimentKind> kind =
      experiment_kind_from_name(kind_name);
  if (!kind) {
    std::string allowed;
    for (const std::string& name : experiment_kind_names())
      allowed += (allowed.empty() ? "" : ", ") + name;
    throw std::invalid_argument("unknown experiment kind '" + kind_name +
                                "' (allowed: " + allowed + ")");
  }

  std::ostringstream out;
  out << "kind: " << kind_name << "\n";
  out << "common fields: name (string, optional), seed (integer"
      << (experiment_is_stochastic(*kind) ? ", required" : ", ignored")
      << "), output_dir (string, optional), expectations (array, optional)\n";
  out << "expectation entries: {name, value, rel_tol | abs_tol} or "
         "{name, min and/or max}\n";
  out << "units: SI throughout (m, s, W, J, rad/s)\n";
  switch (*kind) {
    case ExperimentKind::TrapCharacterization:
      out << "species_file: path to the atom data file (relative to the "
             "scenario)\n"
          << "trap: {wavelength, power_per_site, waist}\n"
          << "scalars: depth, depth_mK, potential, peak_intensity, "
             "rayleigh_range, effective_detuning, total_scattering_rate, "
             "state_changing_rate, coherence_limit, radial_frequency, "
             "axial_frequency, radial_frequency_hz, axial_frequency_hz\n"
          << "files: axial_profile.csv, radial_profile.csv\n";
      break;
    case ExperimentKind::LoadingDetection:
      out << "grid: {rows, cols, pitch, numerical_aperture, demagnification?, "
             "illumination_waist?}\n"
          << "loading: {mode: poisson | collisional_blockade | optimized, "
             "mean (poisson only)}\n"
          << "detection (optional): {background, per_atom, noise_sigma, "
             "histogram_bin_width}\n"
          << "scalars: sites, atoms, mean_occupancy, fraction_empty, "
             "fraction_single, fraction_multi, classification_error_rate, "
             "misclassification_oracle, anomalous_sites\n"
          << "files: sites.csv, histogram.csv\n";
      break;
    case ExperimentKind::RamseyEcho:
      out << "coherence: {rabi_frequency, t2_star?, t2_prime?, "
             "ensemble_size?}\n"
          << "ramsey: {times, analysis_detuning}\n"
          << "echo: {times}\n"
          << "times: array of seconds or {start, stop, count}\n"
          << "scalars: echo_c0_fit, echo_t2_fit, echo_t2_exact_fit, "
             "ramsey_envelope_time, fringe_offset, fringe_amplitude, "
             "fringe_phase\n"
          << "files: ramsey.csv, echo.csv\n";
      break;
    case ExperimentKind::ShiftRegisterEcho:
      out << "shift: {pitch, move_duration, cycles, rows, cols, "
             "filled_columns, species_file, context_waist, context_depth, "
             "eta?, loss_per_cycle?, transport_dephasing_rate?}\n"
          << "coherence: {rabi_frequency, t2_star?, t2_prime?, "
             "ensemble_size?}\n"
          << "echo: {times} spanning at least one cycle\n"
          << "scalars: initial_atoms, surviving_atoms, cycles, "
             "site_shift_per_cycle, displacement, displacement_in_pitches, "
             "atoms_lost, atoms_dropped, t2_rest_fit, t2_shift_fit, t2_ratio, "
             "rest_c0_fit, shift_c0_fit\n"
          << "files: transport.csv, echo_comparison.csv\n";
      break;
    case ExperimentKind::CheckerboardAddressing:
      out << "grid: {rows, cols, pitch, numerical_aperture}\n"
          << "mask: {pattern: full | superlattice | blocks | ring | "
             "checkerboard, pattern parameters}\n"
          << "coherence: {rabi_frequency, t2_star?, t2_prime?, "
             "ensemble_size?}\n"
          << "ramsey: {times, analysis_detuning (nonzero)}\n"
          << "scalars: addressed_sites, unaddressed_sites, relative_phase, "
             "relative_phase_abs, fringe_amplitude_addressed, "
             "fringe_amplitude_unaddressed, population_sum_error\n"
          << "files: fringes.csv, mask.csv\n";
      break;
    case ExperimentKind::RydbergFeasibility:
      out << "blockade: {resolution_factor?, target_fidelity?, "
             "configurations: [{label, blockade_radius, pitch, waist, "
             "intrinsic_error?, technical_error?}]}\n"
          << "scalars per label: <label>.pair_within_blockade, "
             "<label>.sites_resolved, <label>.compatible, "
             "<label>.intrinsic_fidelity, <label>.total_fidelity, "
             "<label>.solved_technical_error (with target_fidelity)\n"
          << "files: feasibility.csv\n";
      break;
  }
  return out.str();
}

}  // namespace microtrap
