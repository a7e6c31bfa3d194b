#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "microtrap/beam_optics.hpp"
#include "microtrap/bloch.hpp"

namespace microtrap {

// Transmission of an "off" lens. The modulator cannot extinguish a lens
// completely; 0.004 models the measured few-hundred-to-one contrast floor.
inline constexpr double kMaskOffTransmission = 0.004;

/**
 * Per-lens transmission mask, row-major, one value per microlens in
 * [t_min, 1]. The modulator is addressed at lens granularity; sub-lens pixel
 * structure is out of scope.
 */
struct SLMMask {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> transmissions;
  double t_min = kMaskOffTransmission;

  // Checks shape, range, and that the mask's dynamic range 1/t_min meets the
  // required contrast floor. Throws std::invalid_argument.
  void validate(double contrast_floor = 250.0) const;

  double at(std::size_t row, std::size_t col) const;
  std::size_t linear_index(std::size_t row, std::size_t col) const;

  // Plain-text grid of transmissions, one row per line, for inspection.
  std::string to_text() const;
};

/**
 * Named illumination patterns. Superlattice keeps every period-th lens in
 * both directions (offsets shift the kept class); Blocks tiles solid
 * block_rows x block_cols islands separated by `gap` off-lenses; Ring keeps
 * lenses within half a site of the given radius (in site units) from the
 * grid centre; Checkerboard keeps even (row+col) parity.
 */
struct PatternKind {
  enum class Tag { Full, Superlattice, Blocks, Ring, Checkerboard };

  Tag tag = Tag::Full;
  std::size_t period = 1;      // superlattice
  std::size_t row_offset = 0;  // superlattice
  std::size_t col_offset = 0;  // superlattice
  std::size_t block_rows = 1;  // blocks
  std::size_t block_cols = 1;  // blocks
  std::size_t gap = 1;         // blocks
  double radius = 0.0;         // ring, site units

  static PatternKind full();
  static PatternKind superlattice(std::size_t period, std::size_t row_offset = 0,
                                  std::size_t col_offset = 0);
  static PatternKind blocks(std::size_t block_rows, std::size_t block_cols,
                            std::size_t gap);
  static PatternKind ring(double radius);
  static PatternKind checkerboard();

  std::string name() const;
};

// Deterministic mask for the pattern: kept lenses at 1.0, others at t_min.
// Patterns that cannot fit the grid throw std::invalid_argument.
SLMMask build_mask(const PatternKind& kind, const LensArraySpec& grid);

// Elementwise product of per-site powers with the mask transmissions.
// Throws std::invalid_argument on shape mismatch.
std::vector<double> apply_mask(const SLMMask& mask,
                               const std::vector<double>& base_power);

// Row-major linear indices of sites with transmission >= threshold, sorted.
// Threshold must lie in (t_min, 1].
std::vector<std::size_t> addressed_sites(const SLMMask& mask, double threshold);

/**
 * One register site: lattice index, focal-plane position, atom count, the
 * qubit state carried by its atoms, and the local trap depth. Empty sites
 * carry no qubit state.
 */
struct Site {
  std::size_t row = 0;
  std::size_t col = 0;
  std::array<double, 3> position{0, 0, 0};  // m
  int occupancy = 0;
  std::optional<BlochVector> qubit;
  double trap_depth = 0.0;  // J, magnitude
};

/**
 * The 2D qubit register. Row-major site storage mirroring the SiteGrid that
 * produced it. A single owner mutates the state during a run; snapshots are
 * freely copyable.
 */
struct RegisterState {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double pitch = 0.0;  // m
  std::vector<Site> sites;

  static RegisterState from_grid(const SiteGrid& grid);

  std::size_t linear_index(std::size_t row, std::size_t col) const;
  Site& at(std::size_t row, std::size_t col);
  const Site& at(std::size_t row, std::size_t col) const;

  // Sets occupancy and clears the qubit state whenever the site empties.
  void set_occupancy(std::size_t index, int count);

  int total_occupancy() const;

  // Bloch norms <= 1 (+1e-9 numeric slack), occupancies >= 0, no qubit state
  // on empty sites. Throws std::logic_error on violation.
  void validate() const;
};

}  // namespace microtrap
