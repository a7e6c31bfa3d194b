#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace microtrap {

/**
 * TEM00 Gaussian beam focused to waist `waist` at `focus_position`. All
 * lengths in metres, power in watts, intensity in W/m^2. Radial and axial
 * coordinates passed to the free functions below are relative to the focus.
 */
struct GaussianBeam {
  double wavelength = 0.0;                        // m
  double power = 0.0;                             // W
  double waist = 0.0;                             // m, 1/e^2 intensity radius
  std::array<double, 3> focus_position{0, 0, 0};  // m

  void validate() const;  // throws std::invalid_argument

  double rayleigh_range() const;
  double radius_at(double z) const;  // w(z) = w0 sqrt(1 + (z/zR)^2)
  double peak_intensity() const;     // I0 = 2P / (pi w0^2)
};

// Smallest focus a lens of the given numerical aperture can produce,
// w0 = lambda / (pi NA): an idealised lower bound on the achievable waist.
// Throws std::invalid_argument unless wavelength > 0 and 0 < NA < 1.
double diffraction_limited_waist(double wavelength, double numerical_aperture);

// z_R = pi w0^2 / lambda. Throws std::invalid_argument on non-positive input.
double rayleigh_range(double waist, double wavelength);

// I(r,z) = I0 (w0/w(z))^2 exp(-2 r^2 / w(z)^2).
double intensity_at(const GaussianBeam& beam, double r, double z);

/**
 * Square microlens array producing one focal spot per lenslet. The focal
 * plane is re-imaged with the given demagnification, so the trap-site pitch
 * is pitch / demagnification.
 */
struct LensArraySpec {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double pitch = 0.0;               // m, lenslet centre-to-centre spacing
  double numerical_aperture = 0.0;
  double demagnification = 1.0;

  void validate() const;  // throws std::invalid_argument

  std::size_t site_count() const { return rows * cols; }
};

struct GridSite {
  std::size_t row = 0;
  std::size_t col = 0;
  std::array<double, 3> position{0, 0, 0};  // m, z = 0 focal plane
  double power_fraction = 1.0;  // relative to the array-centre spot
};

/**
 * Rectangular lattice of trap sites, row-major, centred on the origin.
 * power_fraction holds the illumination envelope sampled at each lenslet
 * centre, normalised to 1 at the array centre; a flat envelope gives 1.0
 * everywhere.
 */
struct SiteGrid {
  std::vector<GridSite> sites;
  double pitch = 0.0;  // m, after demagnification
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t linear_index(std::size_t row, std::size_t col) const;
  const GridSite& at(std::size_t row, std::size_t col) const;
};

/**
 * Trap-site layout for a lens array. Without an illumination waist the
 * global beam is treated as flat and every site's power fraction is 1. With
 * a waist W the Gaussian envelope exp(-2 r^2 / W^2) is sampled at each
 * lenslet centre, r measured from the array centre (the illumination axis).
 * A zero-lens spec yields an empty grid, not an error.
 */
SiteGrid spot_grid(const LensArraySpec& spec,
                   std::optional<double> illumination_waist = std::nullopt);

}  // namespace microtrap
