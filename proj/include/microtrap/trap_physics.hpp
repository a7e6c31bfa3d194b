#pragma once

#include <utility>

#include "microtrap/species.hpp"

namespace microtrap {

/**
 * Single-site dipole-trap laser. power_per_site is the optical power focused
 * into one spot (after any illumination-envelope scaling); zero power is
 * legal and yields a null trap.
 */
struct TrapLaserSpec {
  double wavelength = 0.0;      // m
  double power_per_site = 0.0;  // W
  double waist = 0.0;           // m

  void validate() const;  // throws std::invalid_argument
};

struct TrapCharacteristics {
  double depth = 0.0;                  // J, magnitude of the attractive well
  double potential = 0.0;              // J, signed, at peak intensity
  double peak_intensity = 0.0;         // W/m^2
  double rayleigh_range = 0.0;         // m
  double effective_detuning = 0.0;     // rad/s
  double total_scattering_rate = 0.0;  // 1/s, photons at the laser frequency
  double state_changing_rate = 0.0;    // 1/s, hyperfine-changing events
  double radial_frequency = 0.0;       // rad/s
  double axial_frequency = 0.0;        // rad/s
  double coherence_limit = 0.0;        // s, 1 / state_changing_rate
};

/**
 * Line-strength weighted two-line detuning: 1/D_eff = (2/3)/D2 + (1/3)/D1
 * with D_i = w_L - w_i. Only the red-detuned regime (laser wavelength beyond
 * the D1 line) is supported; anything else throws std::domain_error.
 */
double effective_detuning(const AtomSpecies& species, double laser_wavelength);

// U = (3 pi c^2 / 2 w0^3) (G/D) I, signed: negative (attractive) for D < 0.
// Zero detuning throws std::domain_error.
double dipole_potential(double intensity, double detuning,
                        const AtomSpecies& species);

// G_sc = (3 pi c^2 / 2 hbar w0^3) (G/D)^2 I. Satisfies the exact identity
// U / (hbar G_sc) = D / G with dipole_potential for shared inputs.
double scattering_rate(double intensity, double detuning,
                       const AtomSpecies& species);

// Absolute photon-scattering rate at the laser frequency: scattering_rate at
// the two-line effective detuning times (w_L/w0)^3, the free-space emission
// density factor. This is the rate a photon counter would see.
double photon_scattering_rate(double intensity, const AtomSpecies& species,
                              double laser_wavelength);

/**
 * Hyperfine-state-changing (Raman) scattering rate. The two D-line amplitudes
 * interfere destructively, leaving a (1/D1 - 1/D2)^2 law that falls much
 * faster with detuning than the elastic rate:
 *
 *   R = kRamanCalibration * (3 pi c^2 / 2 hbar w0^3) (w_L/w0)^3
 *       * G^2 (1/D1 - 1/D2)^2 * I
 *
 * The dimensionless calibration pins the 815 nm / 2 mW / 3.7 um reference
 * trap to 0.5 1/s; everything else follows predictively.
 */
double state_changing_rate(double intensity, const AtomSpecies& species,
                           double laser_wavelength);

inline constexpr double kRamanCalibration = 0.2552499358470488;

// Harmonic expansion of a Gaussian-focus trap of the given depth (magnitude):
// w_r = sqrt(4 U0 / (m w0^2)), w_z = sqrt(2 U0 / (m z_R^2)).
// Non-positive inputs throw std::invalid_argument.
std::pair<double, double> trap_frequencies(double depth, double waist,
                                           double rayleigh_range, double mass);

// Full single-site characterization at peak intensity. Zero power yields a
// null trap: zero depth and rates, zero frequencies, infinite coherence.
TrapCharacteristics characterize_trap(const TrapLaserSpec& laser,
                                      const AtomSpecies& species);

}  // namespace microtrap
