#include "microtrap/species.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "microtrap/constants.hpp"

namespace microtrap {

double AtomSpecies::d2_angular_frequency() const {
  return kTwoPi * kSpeedOfLight / d2_wavelength;
}

double AtomSpecies::d1_angular_frequency() const {
  return kTwoPi * kSpeedOfLight / d1_wavelength;
}

double AtomSpecies::effective_transition_frequency() const {
  return (2.0 * d2_angular_frequency() + d1_angular_frequency()) / 3.0;
}

void AtomSpecies::validate() const {
  if (mass <= 0.0) throw std::invalid_argument("species: mass must be > 0");
  if (d2_wavelength <= 0.0 || d1_wavelength <= 0.0)
    throw std::invalid_argument("species: line wavelengths must be > 0");
  if (d1_wavelength <= d2_wavelength)
    throw std::invalid_argument("species: D1 wavelength must exceed D2 wavelength");
  if (natural_linewidth <= 0.0)
    throw std::invalid_argument("species: natural linewidth must be > 0");
  if (qubit_splitting <= 0.0)
    throw std::invalid_argument("species: qubit splitting must be > 0");
}

AtomSpecies AtomSpecies::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("species: cannot open " + path);
  nlohmann::json j;
  in >> j;

  AtomSpecies s;
  s.symbol = j.at("symbol").get<std::string>();
  s.mass = j.at("mass_kg").get<double>();
  s.d2_wavelength = j.at("d2_wavelength_nm").get<double>() * 1e-9;
  s.d1_wavelength = j.at("d1_wavelength_nm").get<double>() * 1e-9;
  s.natural_linewidth = j.at("natural_linewidth_rad_per_s").get<double>();
  s.qubit_splitting = j.at("qubit_splitting_rad_per_s").get<double>();
  s.validate();
  return s;
}

}  // namespace microtrap
