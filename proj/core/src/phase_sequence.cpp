#include "geophase/phase_sequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include <fmt/format.h>

#include "geophase/angle.hpp"
#include "geophase/errors.hpp"
#include "segment_walker.hpp"

namespace geophase {

PhaseSequence::PhaseSequence(SurfaceSpec surface, WindingChain chain, CycleAssignment assignment,
                             double horizon)
    : surface_(surface),
      chain_(std::move(chain)),
      assignment_(std::move(assignment)),
      horizon_(horizon) {
  if (chain_.size() != surface_.basis_size()) {
    throw DimensionError("chain size " + std::to_string(chain_.size()) +
                         " does not match basis size " + std::to_string(surface_.basis_size()));
  }
  if (assignment_.size() != surface_.basis_size()) {
    throw DimensionError("assignment size " + std::to_string(assignment_.size()) +
                         " does not match basis size " + std::to_string(surface_.basis_size()));
  }
  if (!std::isfinite(horizon_) || horizon_ <= 0.0) {
    throw DomainError("horizon must be positive and finite");
  }
}

std::vector<std::size_t> PhaseSequence::active_cycles() const {
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < chain_.size(); ++i) {
    if (chain_[i] != 0) active.push_back(i);
  }
  return active;
}

std::size_t PhaseSequence::distinct_active_periods() const {
  std::set<double> periods;
  for (std::size_t i : active_cycles()) periods.insert(assignment_.periods()[i]);
  return periods.size();
}

std::uint64_t PhaseSequence::event_count(double t) const {
  std::uint64_t total = 0;
  for (std::size_t i : active_cycles()) {
    total += static_cast<std::uint64_t>(winding_count(assignment_.periods()[i], t));
  }
  return total;
}

std::int64_t winding_count(double period, double tau) {
  if (tau < period) return 0;
  auto n = static_cast<std::int64_t>(std::floor(tau / period));
  // The quotient can be off by one against the product test; settle on the
  // product, which is what the event clock uses.
  while (static_cast<double>(n + 1) * period <= tau) ++n;
  while (n > 0 && static_cast<double>(n) * period > tau) --n;
  return n;
}

namespace detail {

std::vector<Channel> channels_of(const PhaseSequence& seq, int sign) {
  std::vector<Channel> channels;
  for (std::size_t i : seq.active_cycles()) {
    channels.push_back(Channel{seq.assignment().periods()[i], seq.chain()[i],
                               seq.assignment().betas()[i], sign, i});
  }
  return channels;
}

double phase_from_counts(const std::vector<Channel>& channels,
                         const std::vector<std::int64_t>& counts) {
  double total = 0.0;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    std::int64_t turns = 0;
    if (__builtin_mul_overflow(channels[c].winding, counts[c], &turns)) {
      throw DomainError("winding count overflows 64-bit range");
    }
    const double contribution = scaled_angle(turns, channels[c].beta);
    total += channels[c].sign > 0 ? contribution : -contribution;
  }
  return wrap_angle(total);
}

EventClock::EventClock(const std::vector<Channel>& channels, double start) {
  for (const auto& ch : channels) {
    periods_.push_back(ch.period);
    const std::int64_t n = winding_count(ch.period, start) + 1;
    index_.push_back(n);
    times_.push_back(static_cast<double>(n) * ch.period);
  }
  refresh();
}

void EventClock::refresh() {
  next_ = std::numeric_limits<double>::infinity();
  for (double t : times_) next_ = std::min(next_, t);
}

SegmentWalker::SegmentWalker(std::vector<Channel> channels)
    : channels_(std::move(channels)), counts_(channels_.size(), 0), clock_(channels_, 0.0) {}

}  // namespace detail

std::vector<PhaseEvent> events_in(const PhaseSequence& seq, double t0, double t1) {
  if (!(t0 >= 0.0) || !(t1 > t0) || t1 > seq.horizon()) {
    throw DomainError(fmt::format("event window ({}, {}] must satisfy 0 <= t0 < t1 <= {}", t0, t1,
                                  seq.horizon()));
  }
  const auto channels = detail::channels_of(seq);
  std::vector<PhaseEvent> events;
  detail::EventClock clock(channels, t0);
  while (clock.next_time() <= t1) {
    const double now = clock.next_time();
    clock.fire([&](std::size_t c) {
      const auto& ch = channels[c];
      events.push_back(PhaseEvent{now, ch.cycle_index, static_cast<double>(ch.winding) * ch.beta});
    });
  }
  return events;
}

double phase_at(const PhaseSequence& seq, double tau) {
  if (!(tau >= 0.0) || tau > seq.horizon()) {
    throw DomainError(fmt::format("tau = {} outside [0, {}]", tau, seq.horizon()));
  }
  const auto channels = detail::channels_of(seq);
  std::vector<std::int64_t> counts;
  counts.reserve(channels.size());
  for (const auto& ch : channels) counts.push_back(winding_count(ch.period, tau));
  return detail::phase_from_counts(channels, counts);
}

double replay_phase(std::span<const PhaseEvent> events) {
  double phase = 0.0;
  for (const auto& e : events) phase = wrap_angle(phase + e.increment);
  return phase;
}

void write_event_log(std::ostream& out, std::span<const PhaseEvent> events) {
  out << "time,cycle_index,increment\n";
  for (const auto& e : events) {
    out << fmt::format("{:.17g},{},{:.17g}\n", e.time, e.cycle_index, e.increment);
  }
  if (!out) throw IoError("failed writing event log");
}

std::vector<PhaseEvent> read_event_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "time,cycle_index,increment") {
    throw IoError("event log is missing its header row");
  }
  std::vector<PhaseEvent> events;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const char* cursor = line.c_str();
    char* end = nullptr;
    PhaseEvent e;
    e.time = std::strtod(cursor, &end);
    if (end == cursor || *end != ',') throw IoError(fmt::format("bad time on line {}", line_no));
    cursor = end + 1;
    const unsigned long long index = std::strtoull(cursor, &end, 10);
    if (end == cursor || *end != ',') {
      throw IoError(fmt::format("bad cycle_index on line {}", line_no));
    }
    e.cycle_index = static_cast<std::size_t>(index);
    cursor = end + 1;
    e.increment = std::strtod(cursor, &end);
    if (end == cursor || *end != '\0') {
      throw IoError(fmt::format("bad increment on line {}", line_no));
    }
    events.push_back(e);
  }
  return events;
}

}  // namespace geophase
