#include <doctest.h>

#include <stdexcept>

#include "microtrap/rng.hpp"
#include "microtrap/rydberg.hpp"

using namespace microtrap;

namespace {

BlockadeConfig demonstrated_pair() {
  BlockadeConfig config;
  config.blockade_radius = 10e-6;
  config.pitch = 8.7e-6;
  config.waist = 3.2e-6;
  config.intrinsic_error = 6.5e-3;
  return config;
}

}  // namespace

TEST_CASE("fundamental 13 um pitch sits outside a 10 um blockade radius") {
  BlockadeConfig config;
  config.blockade_radius = 10e-6;
  config.pitch = 13e-6;
  config.waist = 1.6e-6;
  const GeometryReport report = geometry_compatible(config);
  CHECK(!report.pair_within_blockade);
  CHECK(report.sites_resolved);
  CHECK(!report.compatible());
}

TEST_CASE("demonstrated 8.7 um pitch with 3.2 um waist is compatible") {
  const GeometryReport report = geometry_compatible(demonstrated_pair());
  CHECK(report.pair_within_blockade);
  CHECK(report.sites_resolved);
  CHECK(report.compatible());
}

TEST_CASE("blockade boundary is inclusive at pitch equal to radius") {
  BlockadeConfig config = demonstrated_pair();
  config.pitch = config.blockade_radius;
  CHECK(geometry_compatible(config).pair_within_blockade);
  config.pitch = config.blockade_radius * (1 + 1e-12);
  CHECK(!geometry_compatible(config).pair_within_blockade);
}

TEST_CASE("resolution boundary is inclusive at the factor times the waist") {
  BlockadeConfig config = demonstrated_pair();
  config.pitch = kResolutionFactor * config.waist;
  CHECK(geometry_compatible(config).sites_resolved);
  config.pitch = kResolutionFactor * config.waist * 0.999;
  CHECK(!geometry_compatible(config).sites_resolved);
  // Caller-chosen stricter factor flips the verdict.
  config.pitch = 8.7e-6;
  CHECK(!geometry_compatible(config, 4.0).sites_resolved);
}

TEST_CASE("shrinking the pitch never exits the blockade") {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    BlockadeConfig config;
    config.blockade_radius = 1e-6 + 20e-6 * rng.uniform();
    config.waist = 0.5e-6 + 2e-6 * rng.uniform();
    config.pitch = 1e-6 + 20e-6 * rng.uniform();
    const bool before = geometry_compatible(config).pair_within_blockade;
    config.pitch *= rng.uniform();  // strictly smaller
    if (config.pitch <= 0.0) continue;
    const bool after = geometry_compatible(config).pair_within_blockade;
    if (before) CHECK(after);
  }
}

TEST_CASE("intrinsic error of 6.5e-3 gives fidelity 0.9935") {
  const FidelityBudget budget = gate_fidelity_budget(demonstrated_pair());
  CHECK(budget.intrinsic_fidelity == doctest::Approx(0.9935).epsilon(1e-12));
  CHECK(budget.intrinsic_fidelity > 0.99);
  CHECK(budget.total_fidelity == budget.intrinsic_fidelity);  // no tech error
}

TEST_CASE("solving the budget for total 0.92 gives the technical error") {
  const double solved = solve_technical_error(demonstrated_pair(), 0.92);
  CHECK(solved == doctest::Approx(0.07398087569199796).epsilon(1e-12));

  // Round trip: plugging the solution back reproduces the target.
  BlockadeConfig config = demonstrated_pair();
  config.technical_error = solved;
  CHECK(gate_fidelity_budget(config).total_fidelity ==
        doctest::Approx(0.92).epsilon(1e-12));
}

TEST_CASE("zero errors give unit fidelity") {
  BlockadeConfig config = demonstrated_pair();
  config.intrinsic_error = 0.0;
  const FidelityBudget budget = gate_fidelity_budget(config);
  CHECK(budget.intrinsic_fidelity == 1.0);
  CHECK(budget.total_fidelity == 1.0);
}

TEST_CASE("total fidelity never exceeds intrinsic and stays in range") {
  Rng rng(77);
  for (int i = 0; i < 500; ++i) {
    BlockadeConfig config = demonstrated_pair();
    config.intrinsic_error = rng.uniform();
    config.technical_error = rng.uniform();
    const FidelityBudget budget = gate_fidelity_budget(config);
    CHECK(budget.total_fidelity <= budget.intrinsic_fidelity + 1e-15);
    CHECK(budget.total_fidelity >= 0.0);
    CHECK(budget.intrinsic_fidelity <= 1.0);
  }
}

TEST_CASE("invalid blockade configurations are rejected") {
  BlockadeConfig config = demonstrated_pair();
  config.pitch = 0.0;
  CHECK_THROWS_AS(geometry_compatible(config), std::invalid_argument);
  config = demonstrated_pair();
  config.intrinsic_error = 1.5;
  CHECK_THROWS_AS(gate_fidelity_budget(config), std::domain_error);
  config = demonstrated_pair();
  CHECK_THROWS_AS(solve_technical_error(config, 0.0), std::domain_error);
  CHECK_THROWS_AS(solve_technical_error(config, 0.9999), std::domain_error);
  CHECK_THROWS_AS(geometry_compatible(demonstrated_pair(), 0.0),
                  std::invalid_argument);
}
