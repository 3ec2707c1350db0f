#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "geophase/topology.hpp"

namespace geophase {

/// One phase spike: cycle `cycle_index` completes a winding at `time` and the
/// accumulated phase jumps by `increment` = m_i * beta_i (not reduced mod 2pi).
struct PhaseEvent {
  double time = 0.0;
  std::size_t cycle_index = 0;
  double increment = 0.0;

  friend bool operator==(const PhaseEvent&, const PhaseEvent&) = default;
};

/// Accumulated geometric phase of a winding chain:
///
///   Phi(tau) = sum_i m_i beta_i floor(tau / T_i)   (mod 2pi)
///
/// Piecewise constant, right-continuous, Phi(0) = 0. Each cycle with a
/// nonzero winding number contributes one spike train of period T_i.
class PhaseSequence {
 public:
  PhaseSequence(SurfaceSpec surface, WindingChain chain, CycleAssignment assignment,
                double horizon);

  const SurfaceSpec& surface() const noexcept { return surface_; }
  const WindingChain& chain() const noexcept { return chain_; }
  const CycleAssignment& assignment() const noexcept { return assignment_; }
  double horizon() const noexcept { return horizon_; }

  /// Indices of cycles with nonzero winding number, ascending.
  std::vector<std::size_t> active_cycles() const;
  /// Number of distinct periods among the active cycles.
  std::size_t distinct_active_periods() const;
  /// Number of events in (0, t].
  std::uint64_t event_count(double t) const;

 private:
  SurfaceSpec surface_;
  WindingChain chain_;
  CycleAssignment assignment_;
  double horizon_;
};

/// Largest n >= 0 with n * period <= tau, where n * period is evaluated in
/// floating point exactly as the event generator evaluates it.
std::int64_t winding_count(double period, double tau);

/// All events with time in (t0, t1], by time then ascending cycle index.
std::vector<PhaseEvent> events_in(const PhaseSequence& seq, double t0, double t1);

/// Closed-form Phi(tau) in [0, 2pi).
double phase_at(const PhaseSequence& seq, double tau);

/// Folds event increments in order, reducing mod 2pi after each step.
double replay_phase(std::span<const PhaseEvent> events);

/// Event-log text format: a header line `time,cycle_index,increment`, then one
/// comma-separated record per event with both reals at 17 significant digits.
void write_event_log(std::ostream& out, std::span<const PhaseEvent> events);
std::vector<PhaseEvent> read_event_log(std::istream& in);

}  // namespace geophase
