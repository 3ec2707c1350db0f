#pragma once

// Event-driven traversal shared by the sequence analysis and the correlation
// estimators. Internal to geophase_core.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "geophase/angle.hpp"
#include "geophase/phase_sequence.hpp"

namespace geophase::detail {

/// One spike train contributing sign * winding * beta per completed period.
struct Channel {
  double period = 1.0;
  std::int64_t winding = 0;
  double beta = 0.0;
  int sign = 1;
  std::size_t cycle_index = 0;
};

/// Active channels of a sequence, ascending by cycle index.
std::vector<Channel> channels_of(const PhaseSequence& seq, int sign = 1);

/// sum_c sign_c * winding_c * beta_c * counts_c, reduced to [0, 2pi).
double phase_from_counts(const std::vector<Channel>& channels,
                         const std::vector<std::int64_t>& counts);

/// Merged spike times of several periodic channels. Event n of channel c sits
/// at n * period_c, computed from the integer n.
class EventClock {
 public:
  /// The first event of each channel lies strictly after `start`.
  EventClock(const std::vector<Channel>& channels, double start);

  double next_time() const noexcept { return next_; }

  /// Advances every channel scheduled at next_time(), calling on_fire(c) in
  /// ascending channel order.
  template <class Fn>
  void fire(Fn&& on_fire) {
    const double now = next_;
    for (std::size_t c = 0; c < times_.size(); ++c) {
      if (times_[c] == now) {
        on_fire(c);
        ++index_[c];
        times_[c] = static_cast<double>(index_[c]) * periods_[c];
      }
    }
    refresh();
  }

 private:
  void refresh();

  std::vector<double> periods_;
  std::vector<std::int64_t> index_;
  std::vector<double> times_;
  double next_ = std::numeric_limits<double>::infinity();
};

/// Walks the piecewise-constant phase forward from tau = 0.
class SegmentWalker {
 public:
  explicit SegmentWalker(std::vector<Channel> channels);

  double position() const noexcept { return position_; }
  double phase() const noexcept { return phase_; }
  std::size_t segments() const noexcept { return segments_; }

  /// Emits on_segment(length, phase) for every non-empty constant piece of
  /// [position(), t), then leaves the walker at t.
  template <class Fn>
  void advance_to(double t, Fn&& on_segment) {
    while (clock_.next_time() <= t) {
      const double edge = clock_.next_time();
      emit(edge, on_segment);
      clock_.fire([this](std::size_t c) { ++counts_[c]; });
      phase_ = phase_from_counts(channels_, counts_);
    }
    emit(t, on_segment);
  }

 private:
  template <class Fn>
  void emit(double edge, Fn& on_segment) {
    if (edge > position_) {
      on_segment(edge - position_, phase_);
      ++segments_;
      position_ = edge;
    }
  }

  std::vector<Channel> channels_;
  std::vector<std::int64_t> counts_;
  EventClock clock_;
  double position_ = 0.0;
  double phase_ = 0.0;
  std::size_t segments_ = 0;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace geophase::detail
