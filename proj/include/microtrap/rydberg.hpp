#pragma once

namespace microtrap {

/**
 * Geometry and error-budget inputs for blockade-gate feasibility checks.
 * The blockade radius is an input, never computed here; error terms are
 * dimensionless gate-error probabilities.
 */
struct BlockadeConfig {
  double blockade_radius = 0.0;  // m
  double pitch = 0.0;            // m, site separation under test
  double waist = 0.0;            // m, addressing-beam spot radius
  double intrinsic_error = 0.0;
  double technical_error = 0.0;

  // Lengths must be positive (std::invalid_argument); errors must lie in
  // [0, 1] (std::domain_error).
  void validate() const;
};

// Neighboring Gaussian spots separated by at least this many waists are
// treated as individually addressable; crosstalk intensity at the neighbor
// is below exp(-2 * 2.5^2) ~ 4e-6.
inline constexpr double kResolutionFactor = 2.5;

struct GeometryReport {
  bool pair_within_blockade = false;
  bool sites_resolved = false;

  bool compatible() const { return pair_within_blockade && sites_resolved; }
};

// pair_within_blockade: pitch <= blockade radius (boundary inclusive).
// sites_resolved: pitch >= resolution_factor * waist.
GeometryReport geometry_compatible(
    const BlockadeConfig& config,
    double resolution_factor = kResolutionFactor);

struct FidelityBudget {
  double intrinsic_fidelity = 1.0;
  double total_fidelity = 1.0;
};

// Independent multiplicative composition:
// total = (1 - intrinsic_error) * (1 - technical_error).
FidelityBudget gate_fidelity_budget(const BlockadeConfig& config);

// Technical error x solving (1 - intrinsic_error)(1 - x) = target_fidelity.
// Throws std::domain_error when the target is not reachable, i.e. outside
// (0, 1 - intrinsic_error].
double solve_technical_error(const BlockadeConfig& config,
                             double target_fidelity);

}  // namespace microtrap
