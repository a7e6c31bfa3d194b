#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "microtrap/constants.hpp"
#include "microtrap/qubit_dynamics.hpp"
#include "microtrap/rng.hpp"

using namespace microtrap;

namespace {

constexpr double kRabi = kTwoPi * 1e6;  // rad/s

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) /
                      static_cast<double>(n - 1);
  return out;
}

}  // namespace

TEST_CASE("pi pulse inverts the population") {
  const Pulse p = Pulse::pi(kRabi);
  CHECK(p.duration == doctest::Approx(0.5e-6).epsilon(1e-12));  // microsecond scale
  const BlochVector up = apply_pulse(BlochVector::ground(), p);
  CHECK(up.w == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(up.u) < 1e-12);
}

TEST_CASE("two half-pi pulses compose into a pi pulse") {
  const Pulse half = Pulse::half_pi(kRabi);
  const BlochVector a =
      apply_pulse(apply_pulse(BlochVector::ground(), half), half);
  const BlochVector b = apply_pulse(BlochVector::ground(), Pulse::pi(kRabi));
  CHECK(a.u == doctest::Approx(b.u).epsilon(1e-9));
  CHECK(a.v == doctest::Approx(b.v).epsilon(1e-9));
  CHECK(a.w == doctest::Approx(b.w).epsilon(1e-9));
}

TEST_CASE("pulses preserve the Bloch norm") {
  Rng rng(2718);
  BlochVector state{0.0, 0.0, -1.0};
  for (int i = 0; i < 200; ++i) {
    Pulse p;
    p.rabi_frequency = kRabi * (0.2 + rng.uniform());
    p.duration = 2e-6 * rng.uniform();
    p.phase = kTwoPi * rng.uniform();
    p.detuning = kRabi * (rng.uniform() - 0.5);
    state = apply_pulse(state, p);
    CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("detuned pulse rotates about a tilted axis") {
  // With delta = Omega the effective axis tilts 45 degrees; a time-pi/W_eff
  // pulse no longer fully inverts.
  Pulse p;
  p.rabi_frequency = kRabi;
  p.detuning = kRabi;
  p.duration = kPi / std::hypot(p.rabi_frequency, p.detuning);
  const BlochVector b = apply_pulse(BlochVector::ground(), p);
  CHECK(b.w == doctest::Approx(0.0).epsilon(1e-9));  // half inversion
  CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero-length and zero-strength pulses are identities") {
  const BlochVector s{0.3, -0.4, 0.5};
  Pulse p;
  p.rabi_frequency = 0.0;
  p.duration = 1e-6;
  const BlochVector a = apply_pulse(s, p);
  CHECK(a.u == s.u);
  CHECK(a.v == s.v);
  CHECK(a.w == s.w);
  CHECK_THROWS_AS(Pulse::pi(0.0), std::invalid_argument);
}

TEST_CASE("free evolution dephases the ensemble mean to 1/e at t2_star") {
  DephasingModel model;
  model.t2_star = 1e-3;
  model.ensemble_size = 10000;
  QubitEnsemble ens(model, 314);
  ens.apply(Pulse::half_pi(kRabi));
  CHECK(ens.transverse_amplitude() == doctest::Approx(1.0).epsilon(1e-9));
  ens.evolve(model.t2_star);
  CHECK(ens.transverse_amplitude() ==
        doctest::Approx(std::exp(-1.0)).epsilon(0.05));
}

TEST_CASE("zero-time evolution is the identity") {
  DephasingModel model;
  model.t2_star = 1e-3;
  QubitEnsemble ens(model, 1);
  ens.apply(Pulse::half_pi(kRabi));
  const BlochVector before = ens.mean();
  ens.evolve(0.0);
  const BlochVector after = ens.mean();
  CHECK(before.u == after.u);
  CHECK(before.v == after.v);
  CHECK(before.w == after.w);
}

TEST_CASE("single member precesses at its drawn detuning") {
  DephasingModel model;
  model.t2_star = 1e-3;
  model.ensemble_size = 1;
  QubitEnsemble ens(model, 5);
  ens.apply(Pulse::half_pi(kRabi));
  const BlochVector start = ens.mean();
  const double dt = 1e-4;
  ens.evolve(dt);
  const BlochVector end = ens.mean();
  // Pure rotation: transverse magnitude unchanged (t2_prime infinite).
  CHECK(std::hypot(end.u, end.v) ==
        doctest::Approx(std::hypot(start.u, start.v)).epsilon(1e-12));
  CHECK(end.w == start.w);
}

TEST_CASE("homogeneous damping accumulates quadratically in total time") {
  DephasingModel model;
  model.t2_prime = 40e-3;
  model.ensemble_size = 4;
  QubitEnsemble whole(model, 9);
  whole.apply(Pulse::half_pi(kRabi));
  whole.evolve(20e-3);
  QubitEnsemble split(model, 9);
  split.apply(Pulse::half_pi(kRabi));
  for (int i = 0; i < 10; ++i) split.evolve(2e-3);
  // Stepping must not change the accumulated Gaussian factor.
  CHECK(split.transverse_amplitude() ==
        doctest::Approx(whole.transverse_amplitude()).epsilon(1e-9));
  CHECK(whole.transverse_amplitude() ==
        doctest::Approx(std::exp(-0.25)).epsilon(1e-9));
}

TEST_CASE("ramsey contrast decays on the t2_star envelope") {
  DephasingModel model;
  model.t2_star = 1e-3;
  model.ensemble_size = 10000;
  const auto times = std::vector<double>{0.0, 0.5e-3, 1e-3, 2e-3};
  const SequenceResult res =
      ramsey_sequence(model, kRabi, times, kTwoPi * 5e3, 11);
  CHECK(res.contrast[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res.contrast[1] == doctest::Approx(std::exp(-0.25)).epsilon(0.05));
  CHECK(res.contrast[2] == doctest::Approx(std::exp(-1.0)).epsilon(0.06));
  CHECK(res.contrast[3] == doctest::Approx(std::exp(-4.0)).epsilon(1.5));
}

TEST_CASE("ramsey fringes oscillate at the analysis detuning") {
  DephasingModel model;  // no dephasing at all
  const double delta = kTwoPi * 1e3;
  const auto times = linspace(0.0, 2e-3, 41);
  const SequenceResult res = ramsey_sequence(model, kRabi, times, delta, 3);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double expected = (1.0 - std::cos(delta * times[i])) / 2.0;
    CHECK(res.population_ground[i] == doctest::Approx(expected).epsilon(1e-6));
  }
  const FringeFit fit = fit_fringe(times, res.population_ground, delta);
  CHECK(fit.amplitude == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(fit.offset == doctest::Approx(0.5).epsilon(1e-6));
  // A mismatched frequency cannot absorb the fringe into its amplitude.
  const FringeFit off = fit_fringe(times, res.population_ground, 1.37 * delta);
  CHECK(off.amplitude < 0.3);
}

TEST_CASE("ideal ramsey holds unit contrast forever") {
  DephasingModel model;  // both channels off
  const auto times = std::vector<double>{0.0, 1e-3, 10e-3, 100e-3};
  const SequenceResult res = ramsey_sequence(model, kRabi, times, 0.0, 8);
  for (const double c : res.contrast)
    CHECK(c == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("spin echo cancels arbitrary static broadening exactly") {
  DephasingModel model;
  model.t2_star = 0.2e-3;  // severe inhomogeneity
  model.ensemble_size = 500;
  const auto times = std::vector<double>{1e-3, 10e-3, 40e-3};
  const SequenceResult res = spin_echo_sequence(model, kRabi, times, 21);
  for (const double c : res.contrast)
    CHECK(c == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("spin echo contrast follows the Gaussian law in t2_prime") {
  DephasingModel model;
  model.t2_star = 1e-3;
  model.t2_prime = 40e-3;
  model.ensemble_size = 200;
  const auto times = std::vector<double>{20e-3, 40e-3};
  const SequenceResult res = spin_echo_sequence(model, kRabi, times, 33);
  CHECK(res.contrast[0] == doctest::Approx(std::exp(-0.25)).epsilon(1e-9));
  CHECK(res.contrast[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
  // Population after the closing pulse encodes the same contrast.
  CHECK(res.population_ground[0] ==
        doctest::Approx((1.0 + std::exp(-0.25)) / 2.0).epsilon(1e-9));
}

TEST_CASE("dephasing never increases any member's Bloch norm") {
  // The ensemble-mean transverse amplitude may transiently grow when member
  // phases realign, so monotonicity only holds member by member.
  DephasingModel model;
  model.t2_star = 0.5e-3;
  model.t2_prime = 10e-3;
  model.ensemble_size = 64;
  QubitEnsemble ens(model, 55);
  ens.apply(Pulse::half_pi(kRabi));
  std::vector<double> prev(model.ensemble_size, 1.0);
  for (int i = 0; i < 20; ++i) {
    ens.evolve(0.5e-3);
    const auto& members = ens.members();
    for (std::size_t m = 0; m < members.size(); ++m) {
      const double norm = members[m].norm();
      CHECK(norm <= 1.0 + 1e-12);
      CHECK(norm <= prev[m] + 1e-12);
      prev[m] = norm;
    }
  }
}

TEST_CASE("homogeneous damping shrinks the mean amplitude monotonically") {
  DephasingModel model;
  model.t2_prime = 10e-3;  // no static detuning spread
  model.ensemble_size = 16;
  QubitEnsemble ens(model, 56);
  ens.apply(Pulse::half_pi(kRabi));
  double prev = 1.0;
  for (int i = 0; i < 20; ++i) {
    ens.evolve(0.5e-3);
    const double amp = ens.transverse_amplitude();
    CHECK(amp <= prev + 1e-12);
    prev = amp;
  }
}

TEST_CASE("contrast fit recovers exact synthetic parameters") {
  const double t2 = 40e-3;
  const auto times = linspace(1e-3, 80e-3, 25);
  std::vector<double> values(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    values[i] = 0.97 * std::exp(-times[i] * times[i] / (t2 * t2));
  const ContrastFit fit = fit_contrast_decay(times, values);
  CHECK(fit.c0 == doctest::Approx(0.97).epsilon(1e-6));
  CHECK(fit.t2 == doctest::Approx(t2).epsilon(1e-6));
  CHECK(fit.residual_norm < 1e-8);
}

TEST_CASE("contrast fit sweep over parameter grid") {
  for (const double t2 : {10e-3, 25e-3, 40e-3, 80e-3}) {
    for (const double c0 : {1.0, 0.9, 0.6}) {
      const auto times = linspace(2e-3, 2.0 * t2, 20);
      std::vector<double> values(times.size());
      for (std::size_t i = 0; i < times.size(); ++i)
        values[i] = c0 * std::exp(-times[i] * times[i] / (t2 * t2));
      const ContrastFit fit = fit_contrast_decay(times, values);
      CHECK(fit.c0 == doctest::Approx(c0).epsilon(1e-5));
      CHECK(fit.t2 == doctest::Approx(t2).epsilon(1e-5));
    }
  }
}

TEST_CASE("contrast fit on sampled Monte-Carlo data lands within 5%") {
  DephasingModel model;
  model.t2_star = 1e-3;
  model.t2_prime = 40e-3;
  model.ensemble_size = 1000;
  const auto times = linspace(2e-3, 80e-3, 20);
  const SequenceResult res = spin_echo_sequence(model, kRabi, times, 1234);
  std::vector<double> sampled(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    sampled[i] = 2.0 * res.sampled_population[i] - 1.0;
  const ContrastFit fit = fit_contrast_decay(times, sampled);
  CHECK(fit.t2 == doctest::Approx(40e-3).epsilon(0.05));
}

TEST_CASE("non-decaying data fit to infinite coherence time") {
  const auto times = linspace(1e-3, 50e-3, 10);
  const std::vector<double> values(times.size(), 0.93);
  const ContrastFit fit = fit_contrast_decay(times, values);
  CHECK(fit.c0 == doctest::Approx(0.93).epsilon(1e-6));
  CHECK(fit.t2 > 1.0);  // effectively infinite on this time base
}

TEST_CASE("contrast fit input validation") {
  CHECK_THROWS_AS(fit_contrast_decay({1e-3, 2e-3}, {0.5, 0.4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_contrast_decay({1e-3, 1e-3, 1e-3}, {0.5, 0.5, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_contrast_decay({1e-3, 2e-3, 3e-3}, {0.5, 0.4}),
                  std::invalid_argument);
}

TEST_CASE("checkerboard preparation yields complementary pi-shifted fringes") {
  DephasingModel model;
  model.t2_star = 5e-3;
  model.ensemble_size = 2000;
  const double delta = kTwoPi * 1e3;
  const auto times = linspace(0.0, 2e-3, 41);
  const RegisterRamseyResult res =
      register_ramsey(model, kRabi, times, delta, 77);
  CHECK(std::abs(res.relative_phase) == doctest::Approx(kPi).epsilon(0.02));
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double sum = res.prepared_excited.population_ground[i] +
                       res.prepared_ground.population_ground[i];
    CHECK(sum == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("sequence results are reproducible under the seed") {
  DephasingModel model;
  model.t2_star = 2e-3;
  model.ensemble_size = 300;
  const auto times = linspace(0.0, 4e-3, 9);
  const SequenceResult a = ramsey_sequence(model, kRabi, times, kTwoPi * 2e3, 42);
  const SequenceResult b = ramsey_sequence(model, kRabi, times, kTwoPi * 2e3, 42);
  CHECK(a.population_ground == b.population_ground);
  CHECK(a.sampled_population == b.sampled_population);
  CHECK(a.contrast == b.contrast);
  const SequenceResult c = ramsey_sequence(model, kRabi, times, kTwoPi * 2e3, 43);
  CHECK(a.sampled_population != c.sampled_population);
}

TEST_CASE("dephasing model validation") {
  DephasingModel model;
  model.t2_star = 0.0;
  CHECK_THROWS_AS(model.validate(), std::invalid_argument);
  model.t2_star = 1.0;
  model.ensemble_size = 0;
  CHECK_THROWS_AS(model.validate(), std::invalid_argument);
  model.ensemble_size = 10;
  model.t2_prime = -2.0;
  CHECK_THROWS_AS(model.validate(), std::invalid_argument);
}
