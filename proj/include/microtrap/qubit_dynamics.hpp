#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "microtrap/bloch.hpp"

namespace microtrap {

/**
 * Ideal rectangular drive pulse. The rotation axis lies at azimuth `phase`
 * in the equatorial plane, tilted out of it by the detuning:
 * n = (W cos phi, W sin phi, delta) / W_eff, rotation angle W_eff * duration
 * with W_eff = sqrt(W^2 + delta^2). target_sites carries row-major register
 * indices for site-selective application; empty means every site.
 */
struct Pulse {
  double rabi_frequency = 0.0;  // rad/s
  double duration = 0.0;        // s
  double phase = 0.0;           // rad
  double detuning = 0.0;        // rad/s
  std::vector<std::size_t> target_sites;

  void validate() const;  // throws std::invalid_argument

  static Pulse pi(double rabi_frequency, double phase = 0.0);
  static Pulse half_pi(double rabi_frequency, double phase = 0.0);
};

// Rodrigues rotation of the Bloch vector; exactly norm-preserving.
BlochVector apply_pulse(const BlochVector& state, const Pulse& pulse);

/**
 * Two-channel dephasing. t2_star is the reversible inhomogeneous time: each
 * ensemble member precesses at a static detuning drawn from
 * N(0, sqrt(2)/t2_star), giving the mean a exp(-t^2/t2_star^2) envelope
 * (1/e at t = t2_star). t2_prime is the irreversible homogeneous time:
 * transverse components damp by exp(-t_free^2 / t2_prime^2) in accumulated
 * free-evolution time, which a spin echo cannot undo. Either time may be
 * infinity to switch the channel off.
 */
struct DephasingModel {
  double t2_star = std::numeric_limits<double>::infinity();   // s
  double t2_prime = std::numeric_limits<double>::infinity();  // s
  std::size_t ensemble_size = 1000;

  void validate() const;  // throws std::invalid_argument
};

/**
 * Monte-Carlo ensemble of identically driven qubits. Pulses are ideal and
 * instantaneous with respect to dephasing; free evolution advances member
 * phases and the homogeneous damping clock. Member detunings are fixed at
 * construction from (seed, member index) substreams, so results do not
 * depend on evaluation order.
 */
class QubitEnsemble {
 public:
  QubitEnsemble(const DephasingModel& model, std::uint64_t seed,
                BlochVector initial = BlochVector::ground());

  void apply(const Pulse& pulse);

  // Free evolution for dt seconds: members precess at analysis_detuning plus
  // their static offset, then transverse components damp per the accumulated
  // Gaussian law.
  void evolve(double dt, double analysis_detuning = 0.0);

  BlochVector mean() const;
  double mean_population_ground() const;
  // Fringe amplitude available to a final projection pulse.
  double transverse_amplitude() const;
  // Projective measurement: per-member Bernoulli draw on P(|0>), averaged.
  double sampled_population_ground(std::uint64_t seed) const;

  double elapsed_free_time() const { return elapsed_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<BlochVector>& members() const { return members_; }

 private:
  std::vector<BlochVector> members_;
  std::vector<double> detunings_;  // rad/s, static per member
  double t2_prime_;
  double elapsed_ = 0.0;
};

struct SequenceResult {
  std::vector<double> times;               // s, free-evolution span per point
  std::vector<double> population_ground;   // ensemble mean after the sequence
  std::vector<double> sampled_population;  // projective finite-sample version
  std::vector<double> contrast;            // transverse amplitude before the
                                           // final projection pulse
  double analysis_detuning = 0.0;          // rad/s
};

// pi/2 -- t -- pi/2 with the analysis detuning active during free evolution.
// Fringes oscillate at the analysis detuning; contrast decays with both
// dephasing channels.
SequenceResult ramsey_sequence(const DephasingModel& model, double rabi_frequency,
                               const std::vector<double>& times,
                               double analysis_detuning, std::uint64_t seed);

// pi/2 -- t/2 -- pi -- t/2 -- pi/2 per grid entry t (the full echo time
// 2 t_pi). Static member detunings cancel exactly; contrast follows
// exp(-t^2 / t2_prime^2).
SequenceResult spin_echo_sequence(const DephasingModel& model,
                                  double rabi_frequency,
                                  const std::vector<double>& echo_times,
                                  std::uint64_t seed);

struct ContrastFit {
  double c0 = 0.0;             // contrast at zero time
  double t2 = 0.0;             // s, Gaussian 1/e time
  double residual_norm = 0.0;  // sqrt of the sum of squared residuals
};

// Least-squares fit of C(t) = C0 exp(-t^2/T^2). Needs at least three samples
// spanning at least two distinct times; throws std::invalid_argument
// otherwise. A non-decaying input fits to t2 = infinity.
ContrastFit fit_contrast_decay(const std::vector<double>& times,
                               const std::vector<double>& contrasts);

struct FringeFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;  // rad, y = offset + amplitude * cos(detuning*t - phase)
};

// Linear least squares of a fixed-frequency fringe. Throws
// std::invalid_argument when under-determined (< 3 samples or a degenerate
// time grid).
FringeFit fit_fringe(const std::vector<double>& times,
                     const std::vector<double>& values, double detuning);

struct RegisterRamseyResult {
  SequenceResult prepared_excited;  // sites started in |1>
  SequenceResult prepared_ground;   // sites started in |0>
  double relative_phase = 0.0;      // rad, fitted fringe phase difference
};

// Two-class Ramsey experiment: addressed sites are prepared in |1> by a
// masked pi pulse, the rest stay in |0>, then a global Ramsey sequence runs.
// The two parity classes produce complementary fringes; relative_phase is
// the fitted offset between them (pi for ideal preparation).
RegisterRamseyResult register_ramsey(const DephasingModel& model,
                                     double rabi_frequency,
                                     const std::vector<double>& times,
                                     double analysis_detuning,
                                     std::uint64_t seed);

}  // namespace microtrap
