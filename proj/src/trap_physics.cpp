#include "microtrap/trap_physics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "microtrap/beam_optics.hpp"
#include "microtrap/constants.hpp"

namespace microtrap {

namespace {

// Shared prefactor 3 pi c^2 / (2 w0^3) of the potential/rate pair.
double line_prefactor(const AtomSpecies& species) {
  const double w0 = species.effective_transition_frequency();
  return 3.0 * kPi * kSpeedOfLight * kSpeedOfLight / (2.0 * w0 * w0 * w0);
}

}  // namespace

void TrapLaserSpec::validate() const {
  if (wavelength <= 0.0)
    throw std::invalid_argument("trap laser: wavelength must be > 0");
  if (power_per_site < 0.0)
    throw std::invalid_argument("trap laser: power must be >= 0");
  if (waist <= 0.0)
    throw std::invalid_argument("trap laser: waist must be > 0");
}

double effective_detuning(const AtomSpecies& species, double laser_wavelength) {
  species.validate();
  if (laser_wavelength <= species.d1_wavelength)
    throw std::domain_error(
        "effective_detuning: only red detuning beyond the D1 line is supported");
  const double w_l = kTwoPi * kSpeedOfLight / laser_wavelength;
  const double d2 = w_l - species.d2_angular_frequency();
  const double d1 = w_l - species.d1_angular_frequency();
  // 1/D_eff = (2/3)/D2 + (1/3)/D1
  return 3.0 * d1 * d2 / (2.0 * d1 + d2);
}

double dipole_potential(double intensity, double detuning,
                        const AtomSpecies& species) {
  species.validate();
  if (detuning == 0.0)
    throw std::domain_error("dipole_potential: detuning must be nonzero");
  if (intensity < 0.0)
    throw std::invalid_argument("dipole_potential: intensity must be >= 0");
  return line_prefactor(species) * (species.natural_linewidth / detuning) *
         intensity;
}

double scattering_rate(double intensity, double detuning,
                       const AtomSpecies& species) {
  species.validate();
  if (detuning == 0.0)
    throw std::domain_error("scattering_rate: detuning must be nonzero");
  if (intensity < 0.0)
    throw std::invalid_argument("scattering_rate: intensity must be >= 0");
  const double ratio = species.natural_linewidth / detuning;
  return line_prefactor(species) / kHbar * ratio * ratio * intensity;
}

double photon_scattering_rate(double intensity, const AtomSpecies& species,
                              double laser_wavelength) {
  const double detuning = effective_detuning(species, laser_wavelength);
  const double w_l = kTwoPi * kSpeedOfLight / laser_wavelength;
  const double w0 = species.effective_transition_frequency();
  const double emission = (w_l / w0) * (w_l / w0) * (w_l / w0);
  return scattering_rate(intensity, detuning, species) * emission;
}

double state_changing_rate(double intensity, const AtomSpecies& species,
                           double laser_wavelength) {
  species.validate();
  if (laser_wavelength <= species.d1_wavelength)
    throw std::domain_error(
        "state_changing_rate: only red detuning beyond the D1 line is supported");
  if (intensity < 0.0)
    throw std::invalid_argument("state_changing_rate: intensity must be >= 0");
  const double w_l = kTwoPi * kSpeedOfLight / laser_wavelength;
  const double d2 = w_l - species.d2_angular_frequency();
  const double d1 = w_l - species.d1_angular_frequency();
  const double w0 = species.effective_transition_frequency();
  const double emission = (w_l / w0) * (w_l / w0) * (w_l / w0);
  const double interference = 1.0 / d1 - 1.0 / d2;
  const double g = species.natural_linewidth;
  return kRamanCalibration * line_prefactor(species) / kHbar * emission * g * g *
         interference * interference * intensity;
}

std::pair<double, double> trap_frequencies(double depth, double waist,
                                           double rayleigh_range, double mass) {
  if (depth <= 0.0 || waist <= 0.0 || rayleigh_range <= 0.0 || mass <= 0.0)
    throw std::invalid_argument("trap_frequencies: all inputs must be > 0");
  const double radial = std::sqrt(4.0 * depth / (mass * waist * waist));
  const double axial =
      std::sqrt(2.0 * depth / (mass * rayleigh_range * rayleigh_range));
  return {radial, axial};
}

TrapCharacteristics characterize_trap(const TrapLaserSpec& laser,
                                      const AtomSpecies& species) {
  laser.validate();
  species.validate();

  GaussianBeam beam{laser.wavelength, laser.power_per_site, laser.waist};

  TrapCharacteristics out;
  out.peak_intensity = beam.peak_intensity();
  out.rayleigh_range = beam.rayleigh_range();
  out.effective_detuning = effective_detuning(species, laser.wavelength);
  out.potential =
      dipole_potential(out.peak_intensity, out.effective_detuning, species);
  out.depth = -out.potential;  // red detuning: attractive well
  out.total_scattering_rate =
      photon_scattering_rate(out.peak_intensity, species, laser.wavelength);
  out.state_changing_rate =
      state_changing_rate(out.peak_intensity, species, laser.wavelength);

  if (out.depth > 0.0) {
    const auto [radial, axial] = trap_frequencies(out.depth, laser.waist,
                                                  out.rayleigh_range,
                                                  species.mass);
    out.radial_frequency = radial;
    out.axial_frequency = axial;
  }
  out.coherence_limit = out.state_changing_rate > 0.0
                            ? 1.0 / out.state_changing_rate
                            : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace microtrap
