#pragma once

#include <string>

namespace microtrap {

// Atomic data for the trapped species. Values live in a data file
// (data/rb85.json ships with the project), not in code.
struct AtomSpecies {
  std::string symbol;
  double mass = 0.0;               // kg
  double d2_wavelength = 0.0;      // m
  double d1_wavelength = 0.0;      // m
  double natural_linewidth = 0.0;  // rad/s
  double qubit_splitting = 0.0;    // rad/s, hyperfine clock-state splitting

  double d2_angular_frequency() const;
  double d1_angular_frequency() const;

  // Line-strength weighted (2:1 for D2:D1) transition frequency used as
  // the single effective resonance in the dipole-potential formulas.
  double effective_transition_frequency() const;

  // Throws std::invalid_argument on non-physical values.
  void validate() const;

  static AtomSpecies from_json_file(const std::string& path);
};

}  // namespace microtrap
