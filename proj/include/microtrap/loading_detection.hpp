#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "microtrap/register_geometry.hpp"

namespace microtrap {

inline constexpr double kBlockadeSingleAtomProbability = 0.5;
inline constexpr double kOptimizedSingleAtomProbability = 0.83;

/**
 * Per-site loading law. Poisson models unregulated loading; the
 * collisional-blockade and optimized modes yield only 0 or 1 atoms with the
 * given single-atom probability (pair collisions eject both atoms, so
 * two-atom events never survive).
 */
struct LoadingMode {
  enum class Tag { Poisson, CollisionalBlockade, Optimized };

  Tag tag = Tag::Poisson;
  double mean = 1.0;      // Poisson only
  double p_single = 0.5;  // blockade family only

  static LoadingMode poisson(double mean);
  static LoadingMode collisional_blockade();
  static LoadingMode optimized();

  void validate() const;  // throws std::invalid_argument
  std::string name() const;

  // P(site loads exactly n atoms) under this mode.
  double probability_of(int n) const;
};

// Independent per-site draws; site substreams derive from (seed, site index),
// so results do not depend on evaluation order. Occupancies only; no qubit
// states are assigned.
RegisterState load_register(const SiteGrid& grid, const LoadingMode& mode,
                            std::uint64_t seed);

/**
 * Linear fluorescence model: an n-atom site emits
 * background + n * per_atom + N(0, noise_sigma) integrated counts.
 * Defaults reproduce the design levels 300 / 700 / 1100 a.u.
 */
struct DetectionModel {
  double background = 300.0;   // a.u.
  double per_atom = 400.0;     // a.u.
  double noise_sigma = 60.0;   // a.u.

  void validate() const;  // throws std::invalid_argument

  double level(int n) const { return background + n * per_atom; }
  // Midpoint threshold below level(n): signals >= threshold(n) read as >= n.
  double threshold(int n) const { return background + (n - 0.5) * per_atom; }
};

std::vector<double> simulate_fluorescence(const std::vector<int>& occupancy,
                                          const DetectionModel& model,
                                          std::uint64_t seed);

struct DetectionRecord {
  std::vector<double> signals;
  std::vector<int> counts;
  std::vector<bool> anomalous;     // signal below background - 5 sigma
  std::vector<double> thresholds;  // midpoints used, ascending
};

// Nearest-level classification with midpoint thresholds; a signal exactly on
// a threshold reads as the lower level. Counts clamp at zero from below.
DetectionRecord classify_counts(const std::vector<double>& signals,
                                const DetectionModel& model);

struct HistogramBin {
  double center = 0.0;
  int count = 0;
};

// Fixed-width binning of analog signals; empty input gives an empty list.
std::vector<HistogramBin> signal_histogram(const std::vector<double>& signals,
                                           double bin_width);

// Closed-form per-draw misclassification probability for occupancies drawn
// from `mode`: a Gaussian tail crosses a midpoint threshold with probability
// Phi(-(per_atom/2)/sigma) per adjacent boundary, and a site with n atoms has
// one such boundary for n = 0 (no negative counts) and two otherwise.
double misclassification_probability(const DetectionModel& model,
                                     const LoadingMode& mode);

struct ReadoutResult {
  std::vector<int> selected_counts;  // atoms found in the selected state
  std::vector<double> fractions;     // selected / occupancy, 0 for empty sites
  std::vector<double> signals;       // fluorescence from the selected atoms
};

// State-selective readout: each atom projects onto |1> with probability
// (1 + w)/2 from its site's Bloch vector, then the selected-state atoms
// fluoresce. Sites without a qubit state read as all-|0>.
ReadoutResult readout_population(const RegisterState& state, bool select_excited,
                                 const DetectionModel& model, std::uint64_t seed);

}  // namespace microtrap
