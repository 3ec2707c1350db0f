#include "geophase/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "geophase/angle.hpp"
#include "geophase/errors.hpp"
#include "segment_walker.hpp"

namespace geophase {

namespace {

void require_horizon(const PhaseSequence& seq, double t, const char* what) {
  if (!(t > 0.0) || t > seq.horizon()) {
    throw DomainError(fmt::format("{}: t = {} outside (0, {}]", what, t, seq.horizon()));
  }
}

// (1/L) int_0^L exp(-i lambda s) ds as a function of theta = lambda L.
std::complex<double> mean_oscillation(double theta) {
  if (std::abs(theta) < 1e-4) {
    const double t2 = theta * theta;
    return {1.0 - t2 / 6.0, -(theta / 2.0 - theta * t2 / 24.0)};
  }
  const double half = std::sin(0.5 * theta);
  return {std::sin(theta) / theta, -2.0 * half * half / theta};
}

}  // namespace

std::complex<double> bohr_mean(const PhaseSequence& seq, double t) {
  require_horizon(seq, t, "bohr_mean");
  detail::CompensatedSum re;
  detail::CompensatedSum im;
  detail::CompensatedSum length;
  detail::SegmentWalker walker(detail::channels_of(seq));
  walker.advance_to(t, [&](double len, double phase) {
    re.add(len * std::cos(phase));
    im.add(len * std::sin(phase));
    length.add(len);
  });
  return {re.value() / length.value(), im.value() / length.value()};
}

std::complex<double> fourier_bohr_coefficient(const PhaseSequence& seq, double lambda, double t) {
  require_horizon(seq, t, "fourier_bohr_coefficient");
  if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");
  detail::CompensatedSum re;
  detail::CompensatedSum im;
  detail::CompensatedSum length;
  detail::SegmentWalker walker(detail::channels_of(seq));
  walker.advance_to(t, [&](double len, double phase) {
    const double start = walker.position();
    const std::complex<double> piece = std::polar(len, phase - lambda * start) *
                                       mean_oscillation(lambda * len);
    re.add(piece.real());
    im.add(piece.imag());
    length.add(len);
  });
  return {re.value() / length.value(), im.value() / length.value()};
}

AlmostPeriodCandidate shift_discrepancy(const PhaseSequence& seq, double shift, double window) {
  if (!(shift > 0.0) || !(window > 0.0) || window + shift > seq.horizon()) {
    throw DomainError(fmt::format("shift {} with window {} does not fit in horizon {}", shift,
                                  window, seq.horizon()));
  }
  const auto channels = detail::channels_of(seq);

  std::vector<std::int64_t> drift;
  std::vector<double> edges{0.0, window};
  for (const auto& ch : channels) {
    drift.push_back(std::llround(shift / ch.period));
    const std::int64_t last = winding_count(ch.period, window);
    for (std::int64_t n = 1; n <= last; ++n) edges.push_back(static_cast<double>(n) * ch.period);
    const std::int64_t first_shifted = winding_count(ch.period, shift) + 1;
    const std::int64_t last_shifted = winding_count(ch.period, window + shift);
    for (std::int64_t n = first_shifted; n <= last_shifted; ++n) {
      const double x = static_cast<double>(n) * ch.period - shift;
      if (x > 0.0 && x < window) edges.push_back(x);
    }
  }
  std::ranges::sort(edges);

  // Pieces narrower than this are rounding artifacts of coincident edges.
  const double sliver = 1e-12 * std::max(1.0, window + shift);

  AlmostPeriodCandidate result;
  result.shift = shift;
  double mismatched = 0.0;
  for (std::size_t k = 1; k < edges.size(); ++k) {
    const double width = edges[k] - edges[k - 1];
    if (width <= sliver) continue;
    const double mid = edges[k - 1] + 0.5 * width;
    double offset = 0.0;
    for (std::size_t c = 0; c < channels.size(); ++c) {
      const std::int64_t delta = winding_count(channels[c].period, mid + shift) -
                                 winding_count(channels[c].period, mid) - drift[c];
      if (delta != 0) offset += scaled_angle(channels[c].winding * delta, channels[c].beta);
    }
    const double d = 2.0 * std::abs(std::sin(0.5 * wrap_angle(offset)));
    result.discrepancy = std::max(result.discrepancy, d);
    if (d > 1e-12) mismatched += width;
  }
  result.mismatch_fraction = mismatched / window;
  return result;
}

AlmostPeriodReport find_almost_periods(const PhaseSequence& seq, double epsilon,
                                       double search_bound, double sample_step, double window) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (!(sample_step > 0.0)) throw DomainError("sample_step must be positive");
  if (!(search_bound > 0.0) || search_bound > 0.5 * seq.horizon()) {
    throw DomainError(fmt::format("search_bound {} must lie in (0, horizon/2 = {}]", search_bound,
                                  0.5 * seq.horizon()));
  }
  if (window <= 0.0) window = seq.horizon() - search_bound;
  if (window + search_bound > seq.horizon()) {
    throw DomainError("almost-period window plus search bound exceeds the horizon");
  }

  struct Shift {
    double value;
    ShiftSource source;
  };
  std::vector<Shift> shifts;
  std::vector<double> periods;
  for (std::size_t i : seq.active_cycles()) periods.push_back(seq.assignment().periods()[i]);
  std::ranges::sort(periods);
  periods.erase(std::unique(periods.begin(), periods.end()), periods.end());
  for (double period : periods) {
    const std::int64_t count = winding_count(period, search_bound);
    for (std::int64_t n = 1; n <= count; ++n) {
      shifts.push_back({static_cast<double>(n) * period, ShiftSource::period_multiple});
    }
  }
  const std::int64_t grid = winding_count(sample_step, search_bound);
  for (std::int64_t k = 1; k <= grid; ++k) {
    shifts.push_back({static_cast<double>(k) * sample_step, ShiftSource::uniform_grid});
  }
  std::ranges::sort(shifts, [](const Shift& a, const Shift& b) {
    return a.value != b.value ? a.value < b.value : a.source < b.source;
  });

  AlmostPeriodReport report;
  report.epsilon = epsilon;
  report.search_bound = search_bound;
  report.sample_step = sample_step;
  report.window = window;

  double last = -1.0;
  for (const auto& s : shifts) {
    if (last >= 0.0 && s.value - last <= 1e-9 * std::max(1.0, s.value)) continue;
    last = s.value;
    ++report.shifts_examined;
    auto candidate = shift_discrepancy(seq, s.value, window);
    candidate.source = s.source;
    if (candidate.discrepancy <= epsilon) report.candidates.push_back(candidate);
  }
  return report;
}

double monobit_p_value(std::span<const double> phases) {
  if (phases.empty()) throw DomainError("monobit test needs at least one sample");
  long long balance = 0;
  for (double p : phases) balance += wrap_angle(p) < kPi ? 1 : -1;
  const double n = static_cast<double>(phases.size());
  return std::erfc(std::abs(static_cast<double>(balance)) / std::sqrt(2.0 * n));
}

double serial_correlation(std::span<const double> phases) {
  if (phases.size() < 2) throw DomainError("serial correlation needs at least two samples");
  detail::CompensatedSum re;
  detail::CompensatedSum im;
  for (std::size_t k = 0; k + 1 < phases.size(); ++k) {
    // z_k conj(z_{k+1}) = exp(i (phase_k - phase_{k+1}))
    const double d = phases[k] - phases[k + 1];
    re.add(std::cos(d));
    im.add(std::sin(d));
  }
  return std::hypot(re.value(), im.value()) / static_cast<double>(phases.size() - 1);
}

double permutation_entropy(std::span<const double> phases) {
  if (phases.size() < 3) throw DomainError("permutation entropy needs at least three samples");
  std::array<std::size_t, 6> counts{};
  for (std::size_t k = 0; k + 2 < phases.size(); ++k) {
    std::array<int, 3> order{0, 1, 2};
    std::ranges::stable_sort(order, [&](int a, int b) { return phases[k + a] < phases[k + b]; });
    // Lehmer code of the permutation.
    const int first = order[0];
    const int second = order[1] - (order[1] > first ? 1 : 0);
    counts[static_cast<std::size_t>(first * 2 + second)]++;
  }
  const double total = static_cast<double>(phases.size() - 2);
  double entropy = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    entropy -= p * std::log(p);
  }
  return entropy / std::log(6.0);
}

std::vector<double> sample_phases(const PhaseSequence& seq, double t, std::size_t n) {
  require_horizon(seq, t, "sample_phases");
  std::vector<double> phases;
  phases.reserve(n);
  const double dn = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double tau = std::min(t, static_cast<double>(k + 1) * t / dn);
    phases.push_back(phase_at(seq, tau));
  }
  return phases;
}

RandomnessReport randomness_battery(const PhaseSequence& seq, double t, std::size_t n_samples) {
  if (n_samples < 1000) {
    throw DomainError(fmt::format("randomness battery needs >= 1000 samples, got {}", n_samples));
  }
  const auto phases = sample_phases(seq, t, n_samples);
  RandomnessReport report;
  report.t = t;
  report.sample_count = n_samples;
  report.monobit_p_value = monobit_p_value(phases);
  report.serial_correlation = serial_correlation(phases);
  report.permutation_entropy = permutation_entropy(phases);
  report.discretization = "tau_k = (k+1)*t/n for k = 0..n-1; bit_k = [Phi(tau_k) < pi]";
  return report;
}

}  // namespace geophase
