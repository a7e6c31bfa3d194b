#include "microtrap/qubit_dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "microtrap/constants.hpp"
#include "microtrap/rng.hpp"

namespace microtrap {

namespace {

constexpr std::uint64_t kDetuningStream = 11;
constexpr std::uint64_t kSampleStream = 12;
constexpr std::uint64_t kPointStream = 13;
constexpr std::uint64_t kClassStream = 14;

double wrap_angle(double a) {
  while (a > kPi) a -= kTwoPi;
  while (a <= -kPi) a += kTwoPi;
  return a;
}

}  // namespace

void Pulse::validate() const {
  if (rabi_frequency < 0.0)
    throw std::invalid_argument("pulse: Rabi frequency must be >= 0");
  if (duration < 0.0) throw std::invalid_argument("pulse: duration must be >= 0");
}

Pulse Pulse::pi(double rabi_frequency, double phase) {
  if (rabi_frequency <= 0.0)
    throw std::invalid_argument("pulse: Rabi frequency must be > 0");
  Pulse p;
  p.rabi_frequency = rabi_frequency;
  p.duration = kPi / rabi_frequency;
  p.phase = phase;
  return p;
}

Pulse Pulse::half_pi(double rabi_frequency, double phase) {
  if (rabi_frequency <= 0.0)
    throw std::invalid_argument("pulse: Rabi frequency must be > 0");
  Pulse p;
  p.rabi_frequency = rabi_frequency;
  p.duration = kPi / (2.0 * rabi_frequency);
  p.phase = phase;
  return p;
}

BlochVector apply_pulse(const BlochVector& state, const Pulse& pulse) {
  pulse.validate();
  const double w_eff = std::hypot(pulse.rabi_frequency, pulse.detuning);
  if (w_eff == 0.0 || pulse.duration == 0.0) return state;

  const double nx = pulse.rabi_frequency * std::cos(pulse.phase) / w_eff;
  const double ny = pulse.rabi_frequency * std::sin(pulse.phase) / w_eff;
  const double nz = pulse.detuning / w_eff;
  const double angle = w_eff * pulse.duration;
  const double c = std::cos(angle);
  const double s = std::sin(angle);

  // v' = v c + (n x v) s + n (n . v)(1 - c)
  const double dot = nx * state.u + ny * state.v + nz * state.w;
  const double cx = ny * state.w - nz * state.v;
  const double cy = nz * state.u - nx * state.w;
  const double cz = nx * state.v - ny * state.u;
  return BlochVector{state.u * c + cx * s + nx * dot * (1.0 - c),
                     state.v * c + cy * s + ny * dot * (1.0 - c),
                     state.w * c + cz * s + nz * dot * (1.0 - c)};
}

void DephasingModel::validate() const {
  if (!(t2_star > 0.0))
    throw std::invalid_argument("dephasing: t2_star must be > 0");
  if (!(t2_prime > 0.0))
    throw std::invalid_argument("dephasing: t2_prime must be > 0");
  if (ensemble_size == 0)
    throw std::invalid_argument("dephasing: ensemble size must be >= 1");
}

QubitEnsemble::QubitEnsemble(const DephasingModel& model, std::uint64_t seed,
                             BlochVector initial)
    : t2_prime_(model.t2_prime) {
  model.validate();
  members_.assign(model.ensemble_size, initial);
  detunings_.resize(model.ensemble_size, 0.0);
  if (std::isfinite(model.t2_star)) {
    // Static Gaussian detuning of width sqrt(2)/T2*: the ensemble-mean
    // transverse amplitude then follows exp(-t^2/T2*^2).
    const double sigma = std::sqrt(2.0) / model.t2_star;
    for (std::size_t m = 0; m < detunings_.size(); ++m) {
      Rng rng(Rng::mix(seed, kDetuningStream, m));
      detunings_[m] = rng.gaussian(0.0, sigma);
    }
  }
}

void QubitEnsemble::apply(const Pulse& pulse) {
  for (BlochVector& b : members_) b = apply_pulse(b, pulse);
}

void QubitEnsemble::evolve(double dt, double analysis_detuning) {
  if (dt < 0.0) throw std::invalid_argument("evolve: dt must be >= 0");
  if (dt == 0.0) return;

  double damp = 1.0;
  if (std::isfinite(t2_prime_)) {
    const double t0 = elapsed_;
    const double t1 = elapsed_ + dt;
    damp = std::exp(-(t1 * t1 - t0 * t0) / (t2_prime_ * t2_prime_));
  }
  for (std::size_t m = 0; m < members_.size(); ++m) {
    const double a = (analysis_detuning + detunings_[m]) * dt;
    const double c = std::cos(a);
    const double s = std::sin(a);
    BlochVector& b = members_[m];
    const double u = b.u * c - b.v * s;
    const double v = b.u * s + b.v * c;
    b.u = u * damp;
    b.v = v * damp;
  }
  elapsed_ += dt;
}

BlochVector QubitEnsemble::mean() const {
  BlochVector acc;
  for (const BlochVector& b : members_) {
    acc.u += b.u;
    acc.v += b.v;
    acc.w += b.w;
  }
  const double n = static_cast<double>(members_.size());
  return BlochVector{acc.u / n, acc.v / n, acc.w / n};
}

double QubitEnsemble::mean_population_ground() const {
  return population_ground(mean());
}

double QubitEnsemble::transverse_amplitude() const {
  const BlochVector m = mean();
  return std::hypot(m.u, m.v);
}

double QubitEnsemble::sampled_population_ground(std::uint64_t seed) const {
  std::size_t hits = 0;
  for (std::size_t m = 0; m < members_.size(); ++m) {
    Rng rng(Rng::mix(seed, kSampleStream, m));
    hits += rng.bernoulli(population_ground(members_[m])) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(members_.size());
}

SequenceResult ramsey_sequence(const DephasingModel& model, double rabi_frequency,
                               const std::vector<double>& times,
                               double analysis_detuning, std::uint64_t seed) {
  model.validate();
  SequenceResult out;
  out.analysis_detuning = analysis_detuning;
  out.times = times;
  const Pulse half = Pulse::half_pi(rabi_frequency);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < 0.0)
      throw std::invalid_argument("ramsey: times must be >= 0");
    QubitEnsemble ens(model, seed);
    ens.apply(half);
    ens.evolve(times[k], analysis_detuning);
    out.contrast.push_back(ens.transverse_amplitude());
    ens.apply(half);
    out.population_ground.push_back(ens.mean_population_ground());
    out.sampled_population.push_back(
        ens.sampled_population_ground(Rng::mix(seed, kPointStream, k)));
  }
  return out;
}

SequenceResult spin_echo_sequence(const DephasingModel& model,
                                  double rabi_frequency,
                                  const std::vector<double>& echo_times,
                                  std::uint64_t seed) {
  model.validate();
  SequenceResult out;
  out.times = echo_times;
  const Pulse half = Pulse::half_pi(rabi_frequency);
  const Pulse full = Pulse::pi(rabi_frequency);
  for (std::size_t k = 0; k < echo_times.size(); ++k) {
    if (echo_times[k] < 0.0)
      throw std::invalid_argument("spin echo: times must be >= 0");
    QubitEnsemble ens(model, seed);
    ens.apply(half);
    ens.evolve(echo_times[k] / 2.0);
    ens.apply(full);
    ens.evolve(echo_times[k] / 2.0);
    out.contrast.push_back(ens.transverse_amplitude());
    ens.apply(half);
    out.population_ground.push_back(ens.mean_population_ground());
    out.sampled_population.push_back(
        ens.sampled_population_ground(Rng::mix(seed, kPointStream, k)));
  }
  return out;
}

ContrastFit fit_contrast_decay(const std::vector<double>& times,
                               const std::vector<double>& contrasts) {
  if (times.size() != contrasts.size())
    throw std::invalid_argument("contrast fit: size mismatch");
  if (times.size() < 3)
    throw std::invalid_argument("contrast fit: need at least 3 samples");
  double t_lo = times[0], t_hi = times[0];
  for (const double t : times) {
    t_lo = std::min(t_lo, t);
    t_hi = std::max(t_hi, t);
  }
  if (t_hi == t_lo)
    throw std::invalid_argument("contrast fit: times must not all coincide");

  // C(t) = C0 exp(-s t^2) is linear in C0 at fixed s = 1/T^2, so scan s by
  // golden section with the closed-form optimum C0(s).
  const auto sse = [&](double s, double* c0_out) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double e = std::exp(-s * times[i] * times[i]);
      num += contrasts[i] * e;
      den += e * e;
    }
    const double c0 = den > 0.0 ? num / den : 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double r = contrasts[i] - c0 * std::exp(-s * times[i] * times[i]);
      acc += r * r;
    }
    if (c0_out) *c0_out = c0;
    return acc;
  };

  double t_ref = t_hi;  // smallest nonzero time bounds the useful s range
  for (const double t : times)
    if (t > 0.0) t_ref = std::min(t_ref, t);

  // SSE(s) is not globally unimodal (at extreme s the model collapses onto
  // the earliest sample), so bracket the global minimum on a log grid first.
  const double s_lo = 1e-6 / (t_hi * t_hi);
  const double s_hi = 25.0 / (t_ref * t_ref);
  const int grid_n = 240;
  double best_s = 0.0;
  double best_f = sse(0.0, nullptr);
  for (int k = 0; k <= grid_n; ++k) {
    const double s = s_lo * std::pow(s_hi / s_lo,
                                     static_cast<double>(k) / grid_n);
    const double f = sse(s, nullptr);
    if (f < best_f) {
      best_f = f;
      best_s = s;
    }
  }

  const double step = std::pow(s_hi / s_lo, 1.0 / grid_n);
  double lo = best_s > 0.0 ? best_s / step : 0.0;
  double hi = best_s > 0.0 ? best_s * step : s_lo;
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - golden * (hi - lo);
  double x2 = lo + golden * (hi - lo);
  double f1 = sse(x1, nullptr);
  double f2 = sse(x2, nullptr);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = sse(x1, nullptr);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = sse(x2, nullptr);
    }
  }
  double s = (lo + hi) / 2.0;
  if (sse(0.0, nullptr) <= sse(s, nullptr)) s = 0.0;
  ContrastFit fit;
  const double best = sse(s, &fit.c0);
  fit.t2 = s > 0.0 ? 1.0 / std::sqrt(s) : std::numeric_limits<double>::infinity();
  fit.residual_norm = std::sqrt(best);
  return fit;
}

FringeFit fit_fringe(const std::vector<double>& times,
                     const std::vector<double>& values, double detuning) {
  if (times.size() != values.size())
    throw std::invalid_argument("fringe fit: size mismatch");
  if (times.size() < 3)
    throw std::invalid_argument("fringe fit: need at least 3 samples");

  // Normal equations for y = a + b cos(dt) + c sin(dt).
  double s_1 = 0, s_c = 0, s_s = 0, s_cc = 0, s_cs = 0, s_ss = 0;
  double s_y = 0, s_yc = 0, s_ys = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double cv = std::cos(detuning * times[i]);
    const double sv = std::sin(detuning * times[i]);
    s_1 += 1.0;
    s_c += cv;
    s_s += sv;
    s_cc += cv * cv;
    s_cs += cv * sv;
    s_ss += sv * sv;
    s_y += values[i];
    s_yc += values[i] * cv;
    s_ys += values[i] * sv;
  }
  const double m[3][3] = {{s_1, s_c, s_s}, {s_c, s_cc, s_cs}, {s_s, s_cs, s_ss}};
  const double rhs[3] = {s_y, s_yc, s_ys};
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (std::abs(det) < 1e-12)
    throw std::invalid_argument("fringe fit: degenerate time grid");
  const auto solve = [&](int col) {
    double mm[3][3];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) mm[r][c] = (c == col) ? rhs[r] : m[r][c];
    return (mm[0][0] * (mm[1][1] * mm[2][2] - mm[1][2] * mm[2][1]) -
            mm[0][1] * (mm[1][0] * mm[2][2] - mm[1][2] * mm[2][0]) +
            mm[0][2] * (mm[1][0] * mm[2][1] - mm[1][1] * mm[2][0])) /
           det;
  };
  const double a = solve(0);
  const double b = solve(1);
  const double c = solve(2);
  FringeFit fit;
  fit.offset = a;
  fit.amplitude = std::hypot(b, c);
  fit.phase = std::atan2(c, b);
  return fit;
}

RegisterRamseyResult register_ramsey(const DephasingModel& model,
                                     double rabi_frequency,
                                     const std::vector<double>& times,
                                     double analysis_detuning,
                                     std::uint64_t seed) {
  model.validate();
  RegisterRamseyResult out;
  const Pulse half = Pulse::half_pi(rabi_frequency);
  const Pulse prep = Pulse::pi(rabi_frequency);

  for (int cls = 0; cls < 2; ++cls) {
    SequenceResult& res =
        cls == 0 ? out.prepared_excited : out.prepared_ground;
    res.analysis_detuning = analysis_detuning;
    res.times = times;
    const std::uint64_t cls_seed = Rng::mix(seed, kClassStream, cls);
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (times[k] < 0.0)
        throw std::invalid_argument("register ramsey: times must be >= 0");
      QubitEnsemble ens(model, cls_seed);
      if (cls == 0) ens.apply(prep);  // masked preparation into |1>
      ens.apply(half);
      ens.evolve(times[k], analysis_detuning);
      res.contrast.push_back(ens.transverse_amplitude());
      ens.apply(half);
      res.population_ground.push_back(ens.mean_population_ground());
      res.sampled_population.push_back(
          ens.sampled_population_ground(Rng::mix(cls_seed, kPointStream, k)));
    }
  }

  const FringeFit on = fit_fringe(times, out.prepared_excited.population_ground,
                                  analysis_detuning);
  const FringeFit off = fit_fringe(times, out.prepared_ground.population_ground,
                                   analysis_detuning);
  out.relative_phase = wrap_angle(on.phase - off.phase);
  return out;
}

}  // namespace microtrap
