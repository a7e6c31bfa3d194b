#include "microtrap/rydberg.hpp"

#include <cmath>
#include <stdexcept>

namespace microtrap {

void BlockadeConfig::validate() const {
  for (const double length : {blockade_radius, pitch, waist})
    if (!(length > 0.0) || !std::isfinite(length))
      throw std::invalid_argument(
          "blockade radius, pitch, and waist must be positive");
  for (const double error : {intrinsic_error, technical_error})
    if (!(error >= 0.0) || !(error <= 1.0))
      throw std::domain_error("gate errors must lie in [0, 1]");
}

GeometryReport geometry_compatible(const BlockadeConfig& config,
                                   double resolution_factor) {
  config.validate();
  if (!(resolution_factor > 0.0) || !std::isfinite(resolution_factor))
    throw std::invalid_argument("resolution factor must be positive");
  GeometryReport report;
  report.pair_within_blockade = config.pitch <= config.blockade_radius;
  report.sites_resolved = config.pitch >= resolution_factor * config.waist;
  return report;
}

FidelityBudget gate_fidelity_budget(const BlockadeConfig& config) {
  config.validate();
  FidelityBudget budget;
  budget.intrinsic_fidelity = 1.0 - config.intrinsic_error;
  budget.total_fidelity =
      budget.intrinsic_fidelity * (1.0 - config.technical_error);
  return budget;
}

double solve_technical_error(const BlockadeConfig& config,
                             double target_fidelity) {
  config.validate();
  const double intrinsic_fidelity = 1.0 - config.intrinsic_error;
  if (!(target_fidelity > 0.0) || target_fidelity > intrinsic_fidelity)
    throw std::domain_error(
        "target fidelity must lie in (0, 1 - intrinsic_error]");
  return 1.0 - target_fidelity / intrinsic_fidelity;
}

}  // namespace microtrap
