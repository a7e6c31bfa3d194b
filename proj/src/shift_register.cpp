#include "microtrap/shift_register.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "microtrap/rng.hpp"

namespace microtrap {

namespace {

constexpr std::uint64_t kLossStream = 21;
constexpr std::uint64_t kEchoRestStream = 31;
constexpr std::uint64_t kEchoShiftStream = 32;

// Relative tolerance for lattice-coincidence checks.
constexpr double kCoincidenceTolerance = 1e-9;

bool is_transfer(PhaseKind kind) {
  return kind == PhaseKind::LoadMovable ||
         kind == PhaseKind::TransferToStatic ||
         kind == PhaseKind::TransferToMovable;
}

bool is_translation(PhaseKind kind) {
  return kind == PhaseKind::Move || kind == PhaseKind::ReturnMovable;
}

double ramp_value(const DepthRamp& ramp, double fraction) {
  return ramp.start + (ramp.end - ramp.start) * fraction;
}

std::string phase_tag(std::size_t index, PhaseKind kind) {
  std::ostringstream out;
  out << "phase " << index << " (" << phase_name(kind) << "): ";
  return out.str();
}

// Signed column advance of the register contents over one cycle, following
// which array holds them. Returns false when the contents do not end parked
// on a lattice site.
bool cycle_site_shift(const ShiftSchedule& schedule, long long* shift) {
  ArrayChannel holder = ArrayChannel::Static;
  double carried = 0.0;  // displacement accumulated while the movable holds
  long long total = 0;
  for (const SchedulePhase& phase : schedule.phases) {
    switch (phase.kind) {
      case PhaseKind::LoadMovable:
      case PhaseKind::TransferToMovable:
        holder = ArrayChannel::Movable;
        break;
      case PhaseKind::TransferToStatic: {
        holder = ArrayChannel::Static;
        const double steps = carried / schedule.pitch;
        const long long rounded = std::llround(steps);
        if (std::abs(steps - static_cast<double>(rounded)) > 1e-6)
          return false;
        total += rounded;
        carried = 0.0;
        break;
      }
      case PhaseKind::Move:
      case PhaseKind::ReturnMovable:
        if (holder == ArrayChannel::Movable) carried += phase.move_distance;
        break;
    }
  }
  if (std::abs(carried) > kCoincidenceTolerance * schedule.pitch) return false;
  *shift = total;
  return true;
}

}  // namespace

const char* phase_name(PhaseKind kind) {
  switch (kind) {
    case PhaseKind::LoadMovable:
      return "load_movable";
    case PhaseKind::Move:
      return "move";
    case PhaseKind::TransferToStatic:
      return "transfer_to_static";
    case PhaseKind::ReturnMovable:
      return "return_movable";
    case PhaseKind::TransferToMovable:
      return "transfer_to_movable";
  }
  return "unknown";
}

double ShiftSchedule::cycle_duration() const {
  double total = 0.0;
  for (const SchedulePhase& phase : phases) total += phase.duration;
  return total;
}

ChannelSample channel_at(const ShiftSchedule& schedule, ArrayChannel channel,
                         double t) {
  if (schedule.phases.empty())
    throw std::invalid_argument("schedule has no phases");
  const double total = schedule.cycle_duration();
  t = std::clamp(t, 0.0, total);

  double start_time = 0.0;
  double start_offset = 0.0;
  for (std::size_t i = 0; i < schedule.phases.size(); ++i) {
    const SchedulePhase& phase = schedule.phases[i];
    const bool last = i + 1 == schedule.phases.size();
    if (t <= start_time + phase.duration || last) {
      const double local = std::clamp(t - start_time, 0.0, phase.duration);
      const double fraction =
          phase.duration > 0.0 ? local / phase.duration : 1.0;
      ChannelSample sample;
      if (channel == ArrayChannel::Static) {
        sample.depth = ramp_value(phase.static_array, fraction);
        sample.offset = 0.0;
      } else {
        sample.depth = ramp_value(phase.movable, fraction);
        sample.offset = start_offset;
        if (phase.move_distance != 0.0 && phase.duration > 0.0)
          sample.offset +=
              minimum_jerk_position(phase.move_distance, phase.duration, local);
      }
      return sample;
    }
    start_time += phase.duration;
    start_offset += phase.move_distance;
  }
  return {};
}

double minimum_jerk_position(double distance, double duration, double t) {
  if (!(duration > 0.0))
    throw std::invalid_argument("duration must be positive");
  const double tau = std::clamp(t / duration, 0.0, 1.0);
  const double tau3 = tau * tau * tau;
  return distance * (10.0 * tau3 - 15.0 * tau3 * tau + 6.0 * tau3 * tau * tau);
}

double minimum_jerk_peak_acceleration(double distance, double duration) {
  if (!(duration > 0.0))
    throw std::invalid_argument("duration must be positive");
  return 10.0 * std::abs(distance) / (std::sqrt(3.0) * duration * duration);
}

ShiftSchedule default_schedule(double pitch, double move_duration) {
  if (!(pitch > 0.0) || !std::isfinite(pitch))
    throw std::invalid_argument("pitch must be positive and finite");
  if (!(move_duration > 0.0) || !std::isfinite(move_duration))
    throw std::invalid_argument("move_duration must be positive and finite");
  constexpr double kTransferDuration = 1e-3;
  ShiftSchedule schedule;
  schedule.pitch = pitch;
  schedule.phases = {
      {PhaseKind::LoadMovable, kTransferDuration, {0.0, 1.0}, {1.0, 0.0}, 0.0},
      {PhaseKind::Move, move_duration, {1.0, 1.0}, {0.0, 0.0}, pitch},
      {PhaseKind::TransferToStatic, kTransferDuration, {1.0, 0.0}, {0.0, 1.0},
       0.0},
      {PhaseKind::ReturnMovable, move_duration, {0.0, 0.0}, {1.0, 1.0},
       -pitch},
      {PhaseKind::TransferToMovable, kTransferDuration, {0.0, 1.0}, {1.0, 0.0},
       0.0},
  };
  return schedule;
}

ShiftSchedule reversed_schedule(const ShiftSchedule& schedule) {
  ShiftSchedule out = schedule;
  for (SchedulePhase& phase : out.phases)
    phase.move_distance = -phase.move_distance;
  return out;
}

std::vector<std::string> validate_schedule(const ShiftSchedule& schedule) {
  std::vector<std::string> violations;
  const bool pitch_ok = schedule.pitch > 0.0 && std::isfinite(schedule.pitch);
  if (!pitch_ok)
    violations.push_back("lattice pitch must be positive and finite");
  if (schedule.phases.empty()) {
    violations.push_back("schedule has no phases");
    return violations;
  }

  double offset = 0.0;
  for (std::size_t i = 0; i < schedule.phases.size(); ++i) {
    const SchedulePhase& phase = schedule.phases[i];
    const std::string tag = phase_tag(i, phase.kind);
    if (!(phase.duration > 0.0) || !std::isfinite(phase.duration))
      violations.push_back(tag + "duration must be positive");
    for (const double depth : {phase.movable.start, phase.movable.end,
                               phase.static_array.start,
                               phase.static_array.end}) {
      if (depth < 0.0 || !std::isfinite(depth)) {
        violations.push_back(tag + "trap depths must be non-negative");
        break;
      }
    }
    if (!std::isfinite(phase.move_distance)) {
      violations.push_back(tag + "move distance must be finite");
      continue;
    }

    if (is_transfer(phase.kind)) {
      if (phase.move_distance != 0.0)
        violations.push_back(tag + "transfer must keep the arrays stationary");
      const double movable_mid = (phase.movable.start + phase.movable.end) / 2;
      const double static_mid =
          (phase.static_array.start + phase.static_array.end) / 2;
      if (!(movable_mid > 0.0) || !(static_mid > 0.0))
        violations.push_back(tag +
                             "both traps must be on at the transfer instant");
      if (pitch_ok) {
        const double residue = std::remainder(offset, schedule.pitch);
        if (std::abs(residue) > kCoincidenceTolerance * schedule.pitch) {
          std::ostringstream out;
          out << tag << "transfer without coincidence (arrays offset by "
              << residue << " m)";
          violations.push_back(out.str());
        }
      }
    } else if (pitch_ok) {
      if (std::abs(std::abs(phase.move_distance) - schedule.pitch) >
          kCoincidenceTolerance * schedule.pitch)
        violations.push_back(tag +
                             "move distance must equal one lattice pitch");
    }
    offset += phase.move_distance;
  }

  long long shift = 0;
  if (pitch_ok && !cycle_site_shift(schedule, &shift))
    violations.push_back(
        "cycle does not park the contents back on lattice sites");
  return violations;
}

std::vector<std::string> validate_schedule(const ShiftSchedule& schedule,
                                           const TransportContext& context) {
  std::vector<std::string> violations = validate_schedule(schedule);
  if (!(context.mass > 0.0) || !(context.waist > 0.0) ||
      !(context.trap_depth > 0.0) || !(context.eta > 0.0)) {
    violations.push_back(
        "transport context requires positive mass, waist, trap depth, and "
        "eta");
    return violations;
  }
  for (std::size_t i = 0; i < schedule.phases.size(); ++i) {
    const SchedulePhase& phase = schedule.phases[i];
    if (!is_translation(phase.kind) || !(phase.duration > 0.0) ||
        !std::isfinite(phase.move_distance) || phase.move_distance == 0.0)
      continue;
    const double a_max =
        minimum_jerk_peak_acceleration(phase.move_distance, phase.duration);
    const double force_scale = context.mass * a_max * context.waist;
    const double bound = context.eta * context.trap_depth;
    if (force_scale >= bound) {
      std::ostringstream out;
      out << phase_tag(i, phase.kind)
          << "adiabaticity bound exceeded: m*a_max*w0 = " << force_scale
          << " J >= eta*U0 = " << bound << " J";
      violations.push_back(out.str());
    }
  }
  return violations;
}

std::pair<RegisterState, TransportResult> run_cycles(
    const RegisterState& state, const ShiftSchedule& schedule, int n_cycles,
    const LossModel& loss, std::uint64_t seed) {
  if (n_cycles < 0)
    throw std::invalid_argument("cycle count must be non-negative");
  if (!(loss.loss_per_cycle >= 0.0) || !(loss.loss_per_cycle <= 1.0))
    throw std::invalid_argument("loss probability must lie in [0, 1]");
  const std::vector<std::string> violations = validate_schedule(schedule);
  if (!violations.empty()) {
    std::string message = "invalid shift schedule:";
    for (const std::string& violation : violations)
      message += "\n  " + violation;
    throw std::invalid_argument(message);
  }
  if (!(state.pitch > 0.0) ||
      std::abs(schedule.pitch - state.pitch) >
          kCoincidenceTolerance * state.pitch)
    throw std::invalid_argument(
        "schedule pitch does not match the register pitch");

  long long shift = 0;
  cycle_site_shift(schedule, &shift);  // validated above

  RegisterState out = state;
  TransportResult result;
  result.cycles = n_cycles;
  result.site_shift_per_cycle = static_cast<int>(shift);

  for (int cycle = 0; cycle < n_cycles; ++cycle) {
    if (loss.loss_per_cycle > 0.0) {
      const std::uint64_t cycle_seed =
          Rng::mix(seed, kLossStream, static_cast<std::uint64_t>(cycle));
      for (std::size_t index = 0; index < out.sites.size(); ++index) {
        Site& site = out.sites[index];
        if (site.occupancy == 0) continue;
        Rng rng(Rng::mix(cycle_seed, index));
        const int survivors =
            rng.binomial(site.occupancy, 1.0 - loss.loss_per_cycle);
        result.atoms_lost += site.occupancy - survivors;
        out.set_occupancy(index, survivors);
      }
    }
    if (shift == 0) continue;

    RegisterState next = out;
    for (Site& site : next.sites) {
      site.occupancy = 0;
      site.qubit.reset();
    }
    for (std::size_t row = 0; row < out.rows; ++row) {
      for (std::size_t col = 0; col < out.cols; ++col) {
        const Site& source = out.at(row, col);
        if (source.occupancy == 0) continue;
        const long long target =
            static_cast<long long>(col) + shift;
        if (target < 0 || target >= static_cast<long long>(out.cols)) {
          result.atoms_dropped += source.occupancy;
          continue;
        }
        Site& destination = next.at(row, static_cast<std::size_t>(target));
        destination.occupancy = source.occupancy;
        destination.qubit = source.qubit;
      }
    }
    out = std::move(next);
  }

  result.displacement =
      static_cast<double>(n_cycles) * static_cast<double>(shift) *
      schedule.pitch;
  return {std::move(out), result};
}

ShiftEchoResult shift_with_echo(const DephasingModel& model,
                                const ShiftSchedule& schedule,
                                const std::vector<double>& echo_times,
                                double transport_dephasing_rate,
                                double rabi_frequency, std::uint64_t seed) {
  model.validate();
  const std::vector<std::string> violations = validate_schedule(schedule);
  if (!violations.empty()) {
    std::string message = "invalid shift schedule:";
    for (const std::string& violation : violations)
      message += "\n  " + violation;
    throw std::invalid_argument(message);
  }
  if (!(transport_dephasing_rate >= 0.0) ||
      !std::isfinite(transport_dephasing_rate))
    throw std::invalid_argument(
        "transport dephasing rate must be finite and non-negative");
  if (echo_times.size() < 3)
    throw std::invalid_argument("need at least three echo times");
  double span = 0.0;
  for (const double t : echo_times) span = std::max(span, t);
  if (span < schedule.cycle_duration())
    throw std::invalid_argument(
        "echo grid must span at least one shift cycle");

  DephasingModel shifted = model;
  if (transport_dephasing_rate > 0.0) {
    const double base = std::isfinite(model.t2_prime)
                            ? 1.0 / (model.t2_prime * model.t2_prime)
                            : 0.0;
    shifted.t2_prime = 1.0 / std::sqrt(base + transport_dephasing_rate *
                                                  transport_dephasing_rate);
  }

  const SequenceResult rest = spin_echo_sequence(
      model, rabi_frequency, echo_times, Rng::mix(seed, kEchoRestStream));
  const SequenceResult shift = spin_echo_sequence(
      shifted, rabi_frequency, echo_times, Rng::mix(seed, kEchoShiftStream));

  const auto sampled_contrast = [](const SequenceResult& sequence) {
    std::vector<double> contrast(sequence.sampled_population.size());
    for (std::size_t i = 0; i < contrast.size(); ++i)
      contrast[i] = 2.0 * sequence.sampled_population[i] - 1.0;
    return contrast;
  };

  ShiftEchoResult result;
  result.times = echo_times;
  result.rest_contrast = sampled_contrast(rest);
  result.shift_contrast = sampled_contrast(shift);
  result.rest_fit = fit_contrast_decay(echo_times, result.rest_contrast);
  result.shift_fit = fit_contrast_decay(echo_times, result.shift_contrast);
  if (std::isinf(result.rest_fit.t2) && std::isinf(result.shift_fit.t2))
    result.ratio = 1.0;
  else if (std::isinf(result.rest_fit.t2))
    result.ratio = 0.0;
  else if (std::isinf(result.shift_fit.t2))
    result.ratio = std::numeric_limits<double>::infinity();
  else
    result.ratio = result.shift_fit.t2 / result.rest_fit.t2;
  return result;
}

}  // namespace microtrap
