#include <doctest.h>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "microtrap/register_geometry.hpp"

using namespace microtrap;

namespace {

LensArraySpec make_grid(std::size_t rows, std::size_t cols) {
  LensArraySpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.pitch = 55e-6;
  spec.numerical_aperture = 0.29;
  spec.demagnification = 1.0;
  return spec;
}

std::size_t count_on(const SLMMask& m) {
  return static_cast<std::size_t>(
      std::count(m.transmissions.begin(), m.transmissions.end(), 1.0));
}

}  // namespace

TEST_CASE("full pattern turns every lens on") {
  const SLMMask m = build_mask(PatternKind::full(), make_grid(3, 3));
  CHECK(count_on(m) == 9);
  CHECK_NOTHROW(m.validate());
}

TEST_CASE("superlattice doubles the pitch") {
  const SLMMask m = build_mask(PatternKind::superlattice(2), make_grid(4, 4));
  CHECK(count_on(m) == 4);
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(0, 2) == 1.0);
  CHECK(m.at(2, 0) == 1.0);
  CHECK(m.at(2, 2) == 1.0);
  CHECK(m.at(0, 1) == m.t_min);
  CHECK(m.at(1, 1) == m.t_min);
}

TEST_CASE("superlattice on-lens count matches ceil(rows/p) * ceil(cols/p)") {
  for (const auto& [rows, cols, p] :
       std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>{
           {4, 4, 2}, {5, 5, 2}, {7, 7, 3}, {6, 9, 4}, {8, 8, 1}}) {
    const SLMMask m =
        build_mask(PatternKind::superlattice(p), make_grid(rows, cols));
    const std::size_t want = ((rows + p - 1) / p) * ((cols + p - 1) / p);
    CHECK(count_on(m) == want);
  }
}

TEST_CASE("superlattice offset shifts the kept class") {
  const SLMMask m = build_mask(PatternKind::superlattice(2, 1, 1), make_grid(4, 4));
  CHECK(m.at(1, 1) == 1.0);
  CHECK(m.at(0, 0) == m.t_min);
}

TEST_CASE("checkerboard keeps even parity") {
  const SLMMask m = build_mask(PatternKind::checkerboard(), make_grid(3, 3));
  CHECK(count_on(m) == 5);
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(1, 1) == 1.0);
  CHECK(m.at(0, 1) == m.t_min);
}

TEST_CASE("blocks pattern tiles islands separated by gaps") {
  const SLMMask m = build_mask(PatternKind::blocks(2, 2, 1), make_grid(5, 5));
  // Tiles of period 3: on at rows {0,1,3,4} x cols {0,1,3,4}.
  CHECK(count_on(m) == 16);
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(1, 1) == 1.0);
  CHECK(m.at(2, 2) == m.t_min);
  CHECK(m.at(0, 2) == m.t_min);
  CHECK(m.at(3, 3) == 1.0);
}

TEST_CASE("ring pattern on a 7x7 grid at radius 3") {
  const SLMMask m = build_mask(PatternKind::ring(3.0), make_grid(7, 7));
  const std::vector<std::pair<std::size_t, std::size_t>> expected{
      {0, 2}, {0, 3}, {0, 4}, {1, 1}, {1, 5}, {2, 0}, {2, 6}, {3, 0},
      {3, 6}, {4, 0}, {4, 6}, {5, 1}, {5, 5}, {6, 2}, {6, 3}, {6, 4}};
  CHECK(count_on(m) == expected.size());
  for (const auto& [r, c] : expected) CHECK(m.at(r, c) == 1.0);
  CHECK(m.at(3, 3) == m.t_min);  // centre stays dark
}

TEST_CASE("patterns that cannot fit are rejected") {
  CHECK_THROWS_AS(build_mask(PatternKind::superlattice(5), make_grid(4, 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_mask(PatternKind::superlattice(0), make_grid(4, 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_mask(PatternKind::blocks(6, 2, 1), make_grid(4, 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_mask(PatternKind::ring(12.0), make_grid(4, 4)),
                  std::invalid_argument);
}

TEST_CASE("mask validation enforces range and contrast") {
  SLMMask m = build_mask(PatternKind::full(), make_grid(2, 2));
  CHECK_NOTHROW(m.validate(250.0));
  CHECK_THROWS_AS(m.validate(300.0), std::invalid_argument);  // 1/0.004 = 250
  m.transmissions[0] = 1.5;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m.transmissions[0] = 0.0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("re-applying the full pattern is idempotent") {
  const SLMMask a = build_mask(PatternKind::full(), make_grid(3, 4));
  const SLMMask b = build_mask(PatternKind::full(), make_grid(3, 4));
  CHECK(a.transmissions == b.transmissions);
  const auto powers = apply_mask(a, std::vector<double>(12, 2e-3));
  const auto twice = apply_mask(b, powers);
  CHECK(powers == twice);
}

TEST_CASE("apply_mask scales powers elementwise") {
  SLMMask m = build_mask(PatternKind::checkerboard(), make_grid(2, 2));
  const std::vector<double> base{1.0, 1.0, 1.0, 1.0};
  const auto out = apply_mask(m, base);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == m.t_min);
  CHECK(out[2] == m.t_min);
  CHECK(out[3] == 1.0);
  // Off lens suppresses depth by 1/t_min = 250.
  CHECK(out[0] / out[1] == doctest::Approx(250.0));
  CHECK_THROWS_AS(apply_mask(m, std::vector<double>(3, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("mask application commutes with global power scaling") {
  const SLMMask m = build_mask(PatternKind::ring(1.5), make_grid(4, 4));
  std::vector<double> base(16);
  for (std::size_t i = 0; i < base.size(); ++i)
    base[i] = 1e-3 * (1.0 + 0.1 * static_cast<double>(i));
  const double scale = 3.5;
  auto scaled_first = base;
  for (double& p : scaled_first) p *= scale;
  scaled_first = apply_mask(m, scaled_first);
  auto masked_first = apply_mask(m, base);
  for (double& p : masked_first) p *= scale;
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(scaled_first[i] == doctest::Approx(masked_first[i]).epsilon(1e-12));
}

TEST_CASE("addressed sites") {
  const SLMMask cb = build_mask(PatternKind::checkerboard(), make_grid(3, 3));
  const auto on = addressed_sites(cb, 0.5);
  CHECK(on == std::vector<std::size_t>{0, 2, 4, 6, 8});
  const SLMMask full = build_mask(PatternKind::full(), make_grid(2, 3));
  CHECK(addressed_sites(full, 1.0).size() == 6);
  CHECK_THROWS_AS(addressed_sites(cb, 0.001), std::invalid_argument);
  CHECK_THROWS_AS(addressed_sites(cb, 1.5), std::invalid_argument);
}

TEST_CASE("mask text export") {
  const SLMMask m = build_mask(PatternKind::checkerboard(), make_grid(2, 2));
  CHECK(m.to_text() == "1.000 0.004\n0.004 1.000\n");
}

TEST_CASE("register state from a grid") {
  const SiteGrid grid = spot_grid(make_grid(3, 3));
  RegisterState state = RegisterState::from_grid(grid);
  CHECK(state.sites.size() == 9);
  CHECK(state.total_occupancy() == 0);
  CHECK_NOTHROW(state.validate());

  state.set_occupancy(4, 1);
  state.at(1, 1).qubit = BlochVector::ground();
  CHECK(state.total_occupancy() == 1);
  CHECK_NOTHROW(state.validate());

  // Emptying a site clears its qubit state.
  state.set_occupancy(4, 0);
  CHECK_FALSE(state.at(1, 1).qubit.has_value());
  CHECK_NOTHROW(state.validate());

  CHECK_THROWS_AS(state.set_occupancy(4, -1), std::invalid_argument);
  CHECK_THROWS_AS(state.set_occupancy(99, 1), std::out_of_range);
}

TEST_CASE("register validation catches inconsistent states") {
  const SiteGrid grid = spot_grid(make_grid(2, 2));
  RegisterState state = RegisterState::from_grid(grid);
  state.sites[0].qubit = BlochVector::excited();  // occupancy still 0
  CHECK_THROWS_AS(state.validate(), std::logic_error);
  state.sites[0].occupancy = 1;
  CHECK_NOTHROW(state.validate());
  state.sites[0].qubit = BlochVector{2.0, 0.0, 0.0};
  CHECK_THROWS_AS(state.validate(), std::logic_error);
}
