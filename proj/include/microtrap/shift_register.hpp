#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "microtrap/qubit_dynamics.hpp"
#include "microtrap/register_geometry.hpp"

namespace microtrap {

// Two superimposed trap arrays: the static lattice holds the register, the
// movable array carries atoms between lattice sites.
enum class ArrayChannel { Movable, Static };

enum class PhaseKind {
  LoadMovable,        // hand contents static -> movable at coincidence
  Move,               // translate the movable array by move_distance
  TransferToStatic,   // hand contents movable -> static at coincidence
  ReturnMovable,      // translate the movable array back
  TransferToMovable,  // hand contents static -> movable at coincidence
};

const char* phase_name(PhaseKind kind);

// Linear depth ramp across one phase, in units of the operating trap depth.
struct DepthRamp {
  double start = 1.0;
  double end = 1.0;
};

struct SchedulePhase {
  PhaseKind kind = PhaseKind::Move;
  double duration = 0.0;  // s
  DepthRamp movable;
  DepthRamp static_array;
  double move_distance = 0.0;  // m, movable-channel displacement this phase
};

/**
 * One transport cycle as an ordered phase list. Hand-offs are instantaneous
 * relabelings at the phase midpoint, where crossing depth ramps guarantee
 * both traps are on; the movable offset is a minimum-jerk trajectory inside
 * moving phases and constant elsewhere, so x(t) is continuous throughout.
 */
struct ShiftSchedule {
  double pitch = 0.0;  // m, lattice pitch along the shift axis
  std::vector<SchedulePhase> phases;

  double cycle_duration() const;
};

// Depth and lateral offset of one channel at one instant of the cycle.
struct ChannelSample {
  double depth = 0.0;   // units of the operating trap depth
  double offset = 0.0;  // m, relative to the static lattice
};

// Samples a channel's depth ramp and trajectory at time t (clamped to the
// cycle). The static array never moves.
ChannelSample channel_at(const ShiftSchedule& schedule, ArrayChannel channel,
                         double t);

// Physical inputs for the adiabaticity bound m * a_max * w0 < eta * U0.
struct TransportContext {
  double mass = 0.0;        // kg
  double waist = 0.0;       // m
  double trap_depth = 0.0;  // J
  double eta = 0.1;
};

struct LossModel {
  double loss_per_cycle = 0.0;  // per-atom Bernoulli probability
};

struct TransportResult {
  int cycles = 0;
  int site_shift_per_cycle = 0;    // signed column advance per cycle
  double displacement = 0.0;       // m, per surviving atom, signed
  std::int64_t atoms_lost = 0;     // removed by the loss model
  std::int64_t atoms_dropped = 0;  // shifted past the grid edge
  bool added_dephasing = false;
};

// Position along a minimum-jerk profile covering `distance` in `duration`,
// evaluated at t (clamped to [0, duration]). Velocity and acceleration
// vanish at both endpoints.
double minimum_jerk_position(double distance, double duration, double t);

// Peak acceleration of that profile: 10 |distance| / (sqrt(3) duration^2).
double minimum_jerk_peak_acceleration(double distance, double duration);

// Canonical five-phase cycle: load movable, move one pitch, transfer to
// static, return movable empty, transfer back to movable. Transfers last
// 1 ms; both translations use move_duration. Throws std::invalid_argument
// on non-positive arguments.
ShiftSchedule default_schedule(double pitch, double move_duration);

// Same cycle with every displacement negated, walking contents one pitch
// the other way.
ShiftSchedule reversed_schedule(const ShiftSchedule& schedule);

// Structural checks: positive durations, non-negative depths, transfer
// phases stationary and at lattice coincidence with both traps on, moving
// phases covering exactly one pitch, contents parked back on lattice sites
// by the end of the cycle. Returns human-readable violations; never throws.
std::vector<std::string> validate_schedule(const ShiftSchedule& schedule);

// Structural checks plus the adiabaticity bound for every moving phase.
std::vector<std::string> validate_schedule(const ShiftSchedule& schedule,
                                           const TransportContext& context);

// Runs n_cycles of the schedule on a copy of `state`. Occupancy and qubit
// state advance site_shift_per_cycle columns per cycle; contents shifted
// past the grid edge are dropped and counted; the loss model removes atoms
// per cycle via per-site substreams of `seed`. Throws std::invalid_argument
// on an invalid schedule, pitch mismatch, or bad loss model, always before
// any state is touched.
std::pair<RegisterState, TransportResult> run_cycles(
    const RegisterState& state, const ShiftSchedule& schedule, int n_cycles,
    const LossModel& loss = {}, std::uint64_t seed = 0);

struct ShiftEchoResult {
  std::vector<double> times;           // s, echo grid
  std::vector<double> rest_contrast;   // sampled, no transport
  std::vector<double> shift_contrast;  // sampled, with the cycle embedded
  ContrastFit rest_fit;
  ContrastFit shift_fit;
  double ratio = 1.0;  // fitted T2'(shift) / T2'(rest)
};

// Spin-echo comparison with the transport cycle embedded in the free
// evolution: the echo grid must span at least one cycle duration. A
// transport dephasing rate r adds a Gaussian decay channel in quadrature,
// 1/T_eff^2 = 1/T2'^2 + r^2; the default r = 0 leaves transport
// coherence-neutral. Both curves are sampled projectively and fitted.
ShiftEchoResult shift_with_echo(const DephasingModel& model,
                                const ShiftSchedule& schedule,
                                const std::vector<double>& echo_times,
                                double transport_dephasing_rate,
                                double rabi_frequency, std::uint64_t seed);

}  // namespace microtrap
