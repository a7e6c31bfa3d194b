#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "microtrap/loading_detection.hpp"
#include "microtrap/register_geometry.hpp"

using namespace microtrap;

namespace {

SiteGrid big_grid(std::size_t rows, std::size_t cols) {
  LensArraySpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.pitch = 55e-6;
  spec.numerical_aperture = 0.29;
  spec.demagnification = 1.0;
  return spot_grid(spec);
}

std::vector<int> occupancies(const RegisterState& s) {
  std::vector<int> out(s.sites.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.sites[i].occupancy;
  return out;
}

}  // namespace

TEST_CASE("poisson loading reproduces the single-atom plateau") {
  const SiteGrid grid = big_grid(250, 400);  // 1e5 sites
  const RegisterState state = load_register(grid, LoadingMode::poisson(1.0), 2024);
  std::array<int, 8> hist{};
  for (const Site& s : state.sites)
    hist[static_cast<std::size_t>(std::min(s.occupancy, 7))] += 1;
  const double n = static_cast<double>(state.sites.size());
  const double p1 = hist[1] / n;
  CHECK(p1 == doctest::Approx(0.36787944117144233).epsilon(0.014));
  CHECK(std::abs(p1 - 0.368) < 0.005);
}

TEST_CASE("poisson loading passes a chi-squared test at 1% significance") {
  const SiteGrid grid = big_grid(250, 400);
  const RegisterState state = load_register(grid, LoadingMode::poisson(1.0), 7);
  std::array<int, 7> observed{};  // 0..5 and 6+
  for (const Site& s : state.sites)
    observed[static_cast<std::size_t>(std::min(s.occupancy, 6))] += 1;
  const LoadingMode mode = LoadingMode::poisson(1.0);
  const double n = static_cast<double>(state.sites.size());
  double chi2 = 0.0;
  double tail = 1.0;
  for (int k = 0; k < 6; ++k) {
    const double e = n * mode.probability_of(k);
    tail -= mode.probability_of(k);
    const double d = observed[static_cast<std::size_t>(k)] - e;
    chi2 += d * d / e;
  }
  const double e6 = n * tail;
  const double d6 = observed[6] - e6;
  chi2 += d6 * d6 / e6;
  CHECK(chi2 < 16.812);  // 6 degrees of freedom, 1% level
}

TEST_CASE("blockade modes never load pairs") {
  const SiteGrid grid = big_grid(250, 400);
  for (const auto& [mode, p] :
       {std::pair{LoadingMode::collisional_blockade(), 0.5},
        std::pair{LoadingMode::optimized(), 0.83}}) {
    const RegisterState state = load_register(grid, mode, 99);
    int ones = 0;
    for (const Site& s : state.sites) {
      CHECK(s.occupancy <= 1);
      ones += s.occupancy;
    }
    const double f = ones / static_cast<double>(state.sites.size());
    CHECK(std::abs(f - p) < 0.01);
  }
}

TEST_CASE("loading is reproducible and order independent") {
  const SiteGrid grid = big_grid(20, 20);
  const RegisterState a = load_register(grid, LoadingMode::poisson(1.0), 5);
  const RegisterState b = load_register(grid, LoadingMode::poisson(1.0), 5);
  CHECK(occupancies(a) == occupancies(b));
  const RegisterState c = load_register(grid, LoadingMode::poisson(1.0), 6);
  CHECK(occupancies(a) != occupancies(c));
}

TEST_CASE("loading mode validation") {
  CHECK_THROWS_AS(LoadingMode::poisson(-1.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(LoadingMode::poisson(0.0).validate(), std::invalid_argument);
  LoadingMode m = LoadingMode::optimized();
  m.p_single = 1.2;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("noiseless fluorescence hits the design levels exactly") {
  DetectionModel model;
  model.noise_sigma = 0.0;
  const auto signals = simulate_fluorescence({0, 1, 2, 3}, model, 1);
  CHECK(signals[0] == 300.0);
  CHECK(signals[1] == 700.0);
  CHECK(signals[2] == 1100.0);
  CHECK(signals[3] == 1500.0);
}

TEST_CASE("noiseless round-trip recovers the occupancy") {
  DetectionModel model;
  model.noise_sigma = 0.0;
  const std::vector<int> occ{0, 1, 2, 3, 2, 1, 0};
  const auto rec = classify_counts(simulate_fluorescence(occ, model, 3), model);
  CHECK(rec.counts == occ);
  for (const bool a : rec.anomalous) CHECK_FALSE(a);
}

TEST_CASE("classification thresholds and tie-break") {
  const DetectionModel model;  // 300 / 400 / 60
  const auto rec = classify_counts({710.0, 500.0, 900.0, 499.9, 501.0, 120.0},
                                   model);
  CHECK(rec.counts[0] == 1);
  CHECK(rec.counts[1] == 0);  // exactly at the 0/1 midpoint: lower level
  CHECK(rec.counts[2] == 1);  // exactly at the 1/2 midpoint: lower level
  CHECK(rec.counts[3] == 0);
  CHECK(rec.counts[4] == 1);
  CHECK(rec.counts[5] == 0);
  CHECK(rec.thresholds[0] == doctest::Approx(500.0));
  CHECK(rec.thresholds[1] == doctest::Approx(900.0));
  // 120 < 300 - 5*60 flags as anomalous but still clamps to zero atoms.
  CHECK_FALSE(rec.anomalous[0]);
  CHECK(rec.anomalous[5] == false);  // 120 > 0: threshold is exactly 0 here
  DetectionModel tight = model;
  tight.noise_sigma = 30.0;
  const auto rec2 = classify_counts({120.0}, tight);
  CHECK(rec2.anomalous[0]);  // 120 < 300 - 150
}

TEST_CASE("misclassification oracle matches Monte Carlo at high noise") {
  DetectionModel model;
  model.noise_sigma = 100.0;
  const LoadingMode mode = LoadingMode::poisson(1.0);
  const double oracle = misclassification_probability(model, mode);
  CHECK(oracle == doctest::Approx(0.03713095806868569).epsilon(1e-9));

  const SiteGrid grid = big_grid(250, 400);
  const RegisterState state = load_register(grid, mode, 31);
  const auto occ = occupancies(state);
  const auto rec = classify_counts(simulate_fluorescence(occ, model, 32), model);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < occ.size(); ++i) wrong += rec.counts[i] != occ[i];
  const double rate = static_cast<double>(wrong) / static_cast<double>(occ.size());
  CHECK(rate == doctest::Approx(oracle).epsilon(0.05));
}

TEST_CASE("misclassification rate grows with noise") {
  const LoadingMode mode = LoadingMode::poisson(1.0);
  double prev = 0.0;
  for (const double sigma : {0.0, 40.0, 60.0, 80.0, 100.0, 150.0}) {
    DetectionModel model;
    model.noise_sigma = sigma;
    const double p = misclassification_probability(model, mode);
    CHECK(p >= prev);
    prev = p;
  }
  // Empirical check across a coarse noise step.
  const SiteGrid grid = big_grid(100, 100);
  const RegisterState state = load_register(grid, mode, 17);
  const auto occ = occupancies(state);
  std::array<double, 2> rates{};
  std::size_t k = 0;
  for (const double sigma : {60.0, 150.0}) {
    DetectionModel model;
    model.noise_sigma = sigma;
    const auto rec =
        classify_counts(simulate_fluorescence(occ, model, 18), model);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < occ.size(); ++i) wrong += rec.counts[i] != occ[i];
    rates[k++] = static_cast<double>(wrong) / static_cast<double>(occ.size());
  }
  CHECK(rates[0] < rates[1]);
}

TEST_CASE("histogram bins cover the signal range") {
  const auto bins = signal_histogram({10.0, 25.0, 26.0, 99.0}, 10.0);
  REQUIRE(bins.size() == 9);
  CHECK(bins.front().center == doctest::Approx(15.0));
  CHECK(bins.front().count == 1);
  CHECK(bins[1].center == doctest::Approx(25.0));
  CHECK(bins[1].count == 2);
  CHECK(bins.back().center == doctest::Approx(95.0));
  CHECK(bins.back().count == 1);
  int total = 0;
  for (const auto& b : bins) total += b.count;
  CHECK(total == 4);
  CHECK(signal_histogram({}, 10.0).empty());
  CHECK_THROWS_AS(signal_histogram({1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("state-selective readout at the Bloch poles") {
  const SiteGrid grid = big_grid(2, 2);
  RegisterState state = RegisterState::from_grid(grid);
  state.set_occupancy(0, 3);
  state.sites[0].qubit = BlochVector::excited();
  state.set_occupancy(1, 2);
  state.sites[1].qubit = BlochVector::ground();
  DetectionModel model;
  model.noise_sigma = 0.0;

  const ReadoutResult r1 = readout_population(state, true, model, 5);
  CHECK(r1.selected_counts[0] == 3);
  CHECK(r1.selected_counts[1] == 0);
  CHECK(r1.fractions[0] == 1.0);
  CHECK(r1.signals[0] == doctest::Approx(300.0 + 3 * 400.0));

  const ReadoutResult r0 = readout_population(state, false, model, 5);
  CHECK(r0.selected_counts[0] == 0);
  CHECK(r0.selected_counts[1] == 2);
}

TEST_CASE("equator readout splits evenly") {
  const SiteGrid grid = big_grid(100, 100);
  RegisterState state = RegisterState::from_grid(grid);
  for (std::size_t i = 0; i < state.sites.size(); ++i) {
    state.set_occupancy(i, 10);  // 1e5 atoms total
    state.sites[i].qubit = BlochVector{1.0, 0.0, 0.0};
  }
  DetectionModel model;
  model.noise_sigma = 0.0;
  const ReadoutResult r = readout_population(state, true, model, 77);
  long selected = 0;
  for (const int c : r.selected_counts) selected += c;
  CHECK(static_cast<double>(selected) / 1e5 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("large ensembles report population within shot noise") {
  // 100 atoms per site at P(|1>) = 0.75; per-site fraction should scatter
  // around 0.75 with binomial sigma sqrt(p(1-p)/100) = 0.0433.
  const SiteGrid grid = big_grid(10, 10);
  RegisterState state = RegisterState::from_grid(grid);
  const BlochVector tilted{0.0, std::sqrt(1.0 - 0.25), 0.5};  // w = 0.5
  for (std::size_t i = 0; i < state.sites.size(); ++i) {
    state.set_occupancy(i, 100);
    state.sites[i].qubit = tilted;
  }
  DetectionModel model;
  model.noise_sigma = 0.0;
  const ReadoutResult r = readout_population(state, true, model, 41);
  double mean = 0.0;
  for (const double f : r.fractions) mean += f;
  mean /= static_cast<double>(r.fractions.size());
  CHECK(mean == doctest::Approx(0.75).epsilon(0.02));
  for (const double f : r.fractions) CHECK(std::abs(f - 0.75) < 5.0 * 0.0433);
  // Signal tracks the selected count linearly.
  for (std::size_t i = 0; i < r.signals.size(); ++i)
    CHECK(r.signals[i] ==
          doctest::Approx(300.0 + 400.0 * r.selected_counts[i]));
}

TEST_CASE("detection model validation") {
  DetectionModel model;
  model.per_atom = 0.0;
  CHECK_THROWS_AS(model.validate(), std::invalid_argument);
  model.per_atom = 400.0;
  model.noise_sigma = -1.0;
  CHECK_THROWS_AS(model.validate(), std::invalid_argument);
}
