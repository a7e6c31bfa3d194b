#pragma once

// Physical constants, CODATA 2018 values.

namespace microtrap {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr double kSpeedOfLight = 299792458.0;          // m/s (exact)
inline constexpr double kPlanck = 6.62607015e-34;             // J s (exact)
inline constexpr double kHbar = 1.054571817e-34;              // J s
inline constexpr double kBoltzmann = 1.380649e-23;            // J/K (exact)
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg

}  // namespace microtrap
