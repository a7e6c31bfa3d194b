#include "microtrap/beam_optics.hpp"

#include <cmath>
#include <stdexcept>

#include "microtrap/constants.hpp"

namespace microtrap {

void GaussianBeam::validate() const {
  if (wavelength <= 0.0) throw std::invalid_argument("beam: wavelength must be > 0");
  if (power < 0.0) throw std::invalid_argument("beam: power must be >= 0");
  if (waist <= 0.0) throw std::invalid_argument("beam: waist must be > 0");
}

double GaussianBeam::rayleigh_range() const {
  return microtrap::rayleigh_range(waist, wavelength);
}

double GaussianBeam::radius_at(double z) const {
  const double zr = rayleigh_range();
  return waist * std::sqrt(1.0 + (z / zr) * (z / zr));
}

double GaussianBeam::peak_intensity() const {
  return 2.0 * power / (kPi * waist * waist);
}

double diffraction_limited_waist(double wavelength, double numerical_aperture) {
  if (wavelength <= 0.0)
    throw std::invalid_argument("diffraction_limited_waist: wavelength must be > 0");
  if (numerical_aperture <= 0.0 || numerical_aperture >= 1.0)
    throw std::invalid_argument("diffraction_limited_waist: NA must lie in (0, 1)");
  return wavelength / (kPi * numerical_aperture);
}

double rayleigh_range(double waist, double wavelength) {
  if (waist <= 0.0 || wavelength <= 0.0)
    throw std::invalid_argument("rayleigh_range: waist and wavelength must be > 0");
  return kPi * waist * waist / wavelength;
}

double intensity_at(const GaussianBeam& beam, double r, double z) {
  beam.validate();
  const double w = beam.radius_at(z);
  const double ratio = beam.waist / w;
  return beam.peak_intensity() * ratio * ratio * std::exp(-2.0 * r * r / (w * w));
}

void LensArraySpec::validate() const {
  if (pitch <= 0.0) throw std::invalid_argument("lens array: pitch must be > 0");
  if (numerical_aperture <= 0.0 || numerical_aperture >= 1.0)
    throw std::invalid_argument("lens array: NA must lie in (0, 1)");
  if (demagnification <= 0.0)
    throw std::invalid_argument("lens array: demagnification must be > 0");
}

std::size_t SiteGrid::linear_index(std::size_t row, std::size_t col) const {
  if (row >= rows || col >= cols)
    throw std::out_of_range("site grid: index outside grid");
  return row * cols + col;
}

const GridSite& SiteGrid::at(std::size_t row, std::size_t col) const {
  return sites[linear_index(row, col)];
}

SiteGrid spot_grid(const LensArraySpec& spec,
                   std::optional<double> illumination_waist) {
  spec.validate();
  if (illumination_waist && *illumination_waist <= 0.0)
    throw std::invalid_argument("spot_grid: illumination waist must be > 0");

  SiteGrid grid;
  grid.rows = spec.rows;
  grid.cols = spec.cols;
  grid.pitch = spec.pitch / spec.demagnification;
  grid.sites.reserve(spec.rows * spec.cols);

  // Envelope is sampled at the lenslet centres (pre-demagnification pitch);
  // the focal-plane positions use the demagnified pitch.
  const double row_mid = (static_cast<double>(spec.rows) - 1.0) / 2.0;
  const double col_mid = (static_cast<double>(spec.cols) - 1.0) / 2.0;
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      GridSite site;
      site.row = r;
      site.col = c;
      const double u = (static_cast<double>(c) - col_mid);
      const double v = (static_cast<double>(r) - row_mid);
      site.position = {u * grid.pitch, v * grid.pitch, 0.0};
      if (illumination_waist && std::isfinite(*illumination_waist)) {
        const double rr = (u * u + v * v) * spec.pitch * spec.pitch;
        const double ww = *illumination_waist * *illumination_waist;
        site.power_fraction = std::exp(-2.0 * rr / ww);
      } else {
        site.power_fraction = 1.0;
      }
      grid.sites.push_back(site);
    }
  }
  return grid;
}

}  // namespace microtrap
