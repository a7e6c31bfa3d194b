#pragma once

#include <cmath>

namespace microtrap {

/**
 * Bloch vector (u, v, w) of a two-level qubit. w = -1 is |0>, w = +1 is |1>,
 * so P(|1>) = (1 + w) / 2. Pure states have unit norm; dephasing shrinks the
 * transverse components, never the norm's upper bound.
 */
struct BlochVector {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;

  double norm() const { return std::sqrt(u * u + v * v + w * w); }

  static BlochVector ground() { return {0.0, 0.0, -1.0}; }   // |0>
  static BlochVector excited() { return {0.0, 0.0, 1.0}; }   // |1>
};

inline double population_excited(const BlochVector& b) { return (1.0 + b.w) / 2.0; }
inline double population_ground(const BlochVector& b) { return (1.0 - b.w) / 2.0; }

}  // namespace microtrap
