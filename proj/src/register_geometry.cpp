#include "microtrap/register_geometry.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace microtrap {

void SLMMask::validate(double contrast_floor) const {
  if (transmissions.size() != rows * cols)
    throw std::invalid_argument("mask: shape does not match value count");
  if (t_min <= 0.0 || t_min >= 1.0)
    throw std::invalid_argument("mask: t_min must lie in (0, 1)");
  if (1.0 / t_min < contrast_floor)
    throw std::invalid_argument("mask: dynamic range below required contrast");
  for (const double t : transmissions)
    if (t < t_min || t > 1.0)
      throw std::invalid_argument("mask: transmission outside [t_min, 1]");
}

std::size_t SLMMask::linear_index(std::size_t row, std::size_t col) const {
  if (row >= rows || col >= cols)
    throw std::out_of_range("mask: index outside grid");
  return row * cols + col;
}

double SLMMask::at(std::size_t row, std::size_t col) const {
  return transmissions[linear_index(row, col)];
}

std::string SLMMask::to_text() const {
  std::string out;
  char buf[16];
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::snprintf(buf, sizeof buf, "%s%.3f", c == 0 ? "" : " ",
                    transmissions[r * cols + c]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

PatternKind PatternKind::full() { return PatternKind{}; }

PatternKind PatternKind::superlattice(std::size_t period, std::size_t row_offset,
                                      std::size_t col_offset) {
  PatternKind k;
  k.tag = Tag::Superlattice;
  k.period = period;
  k.row_offset = row_offset;
  k.col_offset = col_offset;
  return k;
}

PatternKind PatternKind::blocks(std::size_t block_rows, std::size_t block_cols,
                                std::size_t gap) {
  PatternKind k;
  k.tag = Tag::Blocks;
  k.block_rows = block_rows;
  k.block_cols = block_cols;
  k.gap = gap;
  return k;
}

PatternKind PatternKind::ring(double radius) {
  PatternKind k;
  k.tag = Tag::Ring;
  k.radius = radius;
  return k;
}

PatternKind PatternKind::checkerboard() {
  PatternKind k;
  k.tag = Tag::Checkerboard;
  return k;
}

std::string PatternKind::name() const {
  switch (tag) {
    case Tag::Full: return "full";
    case Tag::Superlattice: return "superlattice";
    case Tag::Blocks: return "blocks";
    case Tag::Ring: return "ring";
    case Tag::Checkerboard: return "checkerboard";
  }
  return "unknown";
}

namespace {

bool lens_on(const PatternKind& kind, std::size_t r, std::size_t c,
             std::size_t rows, std::size_t cols) {
  switch (kind.tag) {
    case PatternKind::Tag::Full:
      return true;
    case PatternKind::Tag::Superlattice:
      return (r % kind.period) == kind.row_offset % kind.period &&
             (c % kind.period) == kind.col_offset % kind.period;
    case PatternKind::Tag::Blocks: {
      const std::size_t tile = kind.block_rows + kind.gap;
      const std::size_t tile_c = kind.block_cols + kind.gap;
      return (r % tile) < kind.block_rows && (c % tile_c) < kind.block_cols;
    }
    case PatternKind::Tag::Ring: {
      const double cr = (static_cast<double>(rows) - 1.0) / 2.0;
      const double cc = (static_cast<double>(cols) - 1.0) / 2.0;
      const double dist = std::hypot(static_cast<double>(r) - cr,
                                     static_cast<double>(c) - cc);
      return std::abs(dist - kind.radius) <= 0.5;
    }
    case PatternKind::Tag::Checkerboard:
      return ((r + c) % 2) == 0;
  }
  return false;
}

void check_pattern_fits(const PatternKind& kind, const LensArraySpec& grid) {
  switch (kind.tag) {
    case PatternKind::Tag::Superlattice:
      if (kind.period == 0)
        throw std::invalid_argument("pattern: superlattice period must be >= 1");
      if (kind.period > grid.rows || kind.period > grid.cols)
        throw std::invalid_argument("pattern: superlattice period exceeds grid");
      break;
    case PatternKind::Tag::Blocks:
      if (kind.block_rows == 0 || kind.block_cols == 0)
        throw std::invalid_argument("pattern: block dimensions must be >= 1");
      if (kind.block_rows > grid.rows || kind.block_cols > grid.cols)
        throw std::invalid_argument("pattern: block exceeds grid");
      break;
    case PatternKind::Tag::Ring: {
      if (kind.radius <= 0.0)
        throw std::invalid_argument("pattern: ring radius must be > 0");
      const double max_r =
          std::hypot((static_cast<double>(grid.rows) - 1.0) / 2.0,
                     (static_cast<double>(grid.cols) - 1.0) / 2.0);
      if (kind.radius - 0.5 > max_r)
        throw std::invalid_argument("pattern: ring lies outside the grid");
      break;
    }
    case PatternKind::Tag::Full:
    case PatternKind::Tag::Checkerboard:
      break;
  }
}

}  // namespace

SLMMask build_mask(const PatternKind& kind, const LensArraySpec& grid) {
  grid.validate();
  check_pattern_fits(kind, grid);

  SLMMask mask;
  mask.rows = grid.rows;
  mask.cols = grid.cols;
  mask.transmissions.resize(grid.rows * grid.cols, mask.t_min);
  for (std::size_t r = 0; r < grid.rows; ++r)
    for (std::size_t c = 0; c < grid.cols; ++c)
      if (lens_on(kind, r, c, grid.rows, grid.cols))
        mask.transmissions[r * grid.cols + c] = 1.0;
  return mask;
}

std::vector<double> apply_mask(const SLMMask& mask,
                               const std::vector<double>& base_power) {
  if (base_power.size() != mask.transmissions.size())
    throw std::invalid_argument("apply_mask: shape mismatch");
  std::vector<double> out(base_power.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = base_power[i] * mask.transmissions[i];
  return out;
}

std::vector<std::size_t> addressed_sites(const SLMMask& mask, double threshold) {
  if (threshold <= mask.t_min || threshold > 1.0)
    throw std::invalid_argument("addressed_sites: threshold must lie in (t_min, 1]");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mask.transmissions.size(); ++i)
    if (mask.transmissions[i] >= threshold) out.push_back(i);
  return out;
}

RegisterState RegisterState::from_grid(const SiteGrid& grid) {
  RegisterState state;
  state.rows = grid.rows;
  state.cols = grid.cols;
  state.pitch = grid.pitch;
  state.sites.reserve(grid.sites.size());
  for (const GridSite& g : grid.sites) {
    Site s;
    s.row = g.row;
    s.col = g.col;
    s.position = g.position;
    state.sites.push_back(s);
  }
  return state;
}

std::size_t RegisterState::linear_index(std::size_t row, std::size_t col) const {
  if (row >= rows || col >= cols)
    throw std::out_of_range("register: index outside grid");
  return row * cols + col;
}

Site& RegisterState::at(std::size_t row, std::size_t col) {
  return sites[linear_index(row, col)];
}

const Site& RegisterState::at(std::size_t row, std::size_t col) const {
  return sites[linear_index(row, col)];
}

void RegisterState::set_occupancy(std::size_t index, int count) {
  if (index >= sites.size())
    throw std::out_of_range("register: index outside grid");
  if (count < 0) throw std::invalid_argument("register: occupancy must be >= 0");
  sites[index].occupancy = count;
  if (count == 0) sites[index].qubit.reset();
}

int RegisterState::total_occupancy() const {
  return std::accumulate(sites.begin(), sites.end(), 0,
                         [](int acc, const Site& s) { return acc + s.occupancy; });
}

void RegisterState::validate() const {
  if (sites.size() != rows * cols)
    throw std::logic_error("register: shape does not match site count");
  for (const Site& s : sites) {
    if (s.occupancy < 0) throw std::logic_error("register: negative occupancy");
    if (s.occupancy == 0 && s.qubit.has_value())
      throw std::logic_error("register: qubit state on an empty site");
    if (s.qubit && s.qubit->norm() > 1.0 + 1e-9)
      throw std::logic_error("register: Bloch vector norm exceeds 1");
    if (s.trap_depth < 0.0) throw std::logic_error("register: negative trap depth");
  }
}

}  // namespace microtrap
