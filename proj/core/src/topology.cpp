#include "geophase/topology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geophase/angle.hpp"
#include "geophase/errors.hpp"

namespace geophase {

SurfaceSpec::SurfaceSpec(int genus) : genus_(genus) {
  if (genus < 0) throw DomainError("genus must be non-negative, got " + std::to_string(genus));
}

WindingChain::WindingChain(const SurfaceSpec& surface, std::vector<std::int64_t> coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != surface.basis_size()) {
    throw DimensionError("winding chain has " + std::to_string(coefficients_.size()) +
                         " coefficients, surface basis has " +
                         std::to_string(surface.basis_size()));
  }
}

WindingChain WindingChain::zero(const SurfaceSpec& surface) {
  return WindingChain(surface, std::vector<std::int64_t>(surface.basis_size(), 0));
}

bool WindingChain::is_zero() const noexcept {
  return std::ranges::all_of(coefficients_, [](std::int64_t m) { return m == 0; });
}

std::size_t WindingChain::active_count() const noexcept {
  return static_cast<std::size_t>(
      std::ranges::count_if(coefficients_, [](std::int64_t m) { return m != 0; }));
}

WindingChain WindingChain::operator-() const {
  std::vector<std::int64_t> negated(coefficients_.size());
  std::ranges::transform(coefficients_, negated.begin(), [](std::int64_t m) { return -m; });
  return WindingChain(std::move(negated));
}

WindingChain chain_compose(const WindingChain& a, const WindingChain& b) {
  if (a.size() != b.size()) {
    throw DimensionError("cannot compose chains of basis sizes " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
  std::vector<std::int64_t> sum(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) sum[i] = a.coefficients_[i] + b.coefficients_[i];
  return WindingChain(std::move(sum));
}

WindingChain exchange_chain(const WindingChain& chain) {
  std::vector<std::int64_t> swapped(chain.coefficients().begin(), chain.coefficients().end());
  for (std::size_t i = 0; i + 1 < swapped.size(); i += 2) std::swap(swapped[i], swapped[i + 1]);
  const SurfaceSpec surface(static_cast<int>(swapped.size() / 2));
  return WindingChain(surface, std::move(swapped));
}

CycleAssignment::CycleAssignment(std::vector<double> betas, std::vector<double> periods)
    : betas_(std::move(betas)), periods_(std::move(periods)) {
  if (betas_.size() != periods_.size()) {
    throw DimensionError("assignment has " + std::to_string(betas_.size()) + " betas but " +
                         std::to_string(periods_.size()) + " periods");
  }
  for (std::size_t i = 0; i < periods_.size(); ++i) {
    if (!std::isfinite(periods_[i]) || periods_[i] <= 0.0) {
      throw DomainError("period " + std::to_string(i) + " must be positive and finite");
    }
    if (!std::isfinite(betas_[i])) {
      throw DomainError("beta " + std::to_string(i) + " must be finite");
    }
    betas_[i] = wrap_angle(betas_[i]);
  }
}

U1Phase::U1Phase(double radians) : angle_(wrap_angle(radians)) {}

U1Phase U1Phase::inverse() const { return U1Phase(-angle_); }

U1Phase operator*(U1Phase a, U1Phase b) { return U1Phase(a.angle_ + b.angle_); }

U1Phase pairing(const WindingChain& chain, const CycleAssignment& assignment) {
  if (chain.size() != assignment.size()) {
    throw DimensionError("chain has " + std::to_string(chain.size()) +
                         " coefficients, assignment has " + std::to_string(assignment.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    total += scaled_angle(chain[i], assignment.betas()[i]);
  }
  return U1Phase(total);
}

std::optional<RationalWitness> rational_witness(double ratio, std::int64_t max_denominator,
                                                double tolerance) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw DomainError("ratio must be positive");
  if (max_denominator < 1) throw DomainError("max_denominator must be >= 1");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");

  // Convergent recurrences: h_n = a_n h_{n-1} + h_{n-2}, likewise k_n.
  double whole = std::floor(ratio);
  double remainder = ratio - whole;
  std::int64_t h_prev = 1;
  std::int64_t k_prev = 0;
  auto h = static_cast<std::int64_t>(whole);
  std::int64_t k = 1;

  while (k <= max_denominator) {
    if (h >= 1 && std::abs(ratio - static_cast<double>(h) / static_cast<double>(k)) <= tolerance) {
      return RationalWitness{h, k};
    }
    if (remainder <= 0.0) break;
    const double next = 1.0 / remainder;
    const double term = std::floor(next);
    // Any further convergent would have a denominator beyond the bound.
    if (term > static_cast<double>(max_denominator)) break;
    remainder = next - term;
    const auto a = static_cast<std::int64_t>(term);
    const std::int64_t h_next = a * h + h_prev;
    const std::int64_t k_next = a * k + k_prev;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
  }
  return std::nullopt;
}

bool IncommensurabilityReport::all_incommensurable() const {
  return std::ranges::all_of(pairs, [](const PeriodPairVerdict& p) {
    return p.verdict == PairVerdict::incommensurable_at_depth;
  });
}

const PeriodPairVerdict& IncommensurabilityReport::pair(std::size_t i, std::size_t j) const {
  for (const auto& p : pairs) {
    if ((p.shorter == i && p.longer == j) || (p.shorter == j && p.longer == i)) return p;
  }
  throw DomainError("no verdict for period pair (" + std::to_string(i) + ", " +
                    std::to_string(j) + ")");
}

IncommensurabilityReport certify_incommensurable(const CycleAssignment& assignment,
                                                 std::int64_t max_denominator,
                                                 double tolerance) {
  if (max_denominator < 1) throw DomainError("max_denominator must be >= 1");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");

  IncommensurabilityReport report;
  report.max_denominator = max_denominator;
  report.tolerance = tolerance;

  const auto periods = assignment.periods();
  for (std::size_t i = 0; i < periods.size(); ++i) {
    for (std::size_t j = i + 1; j < periods.size(); ++j) {
      PeriodPairVerdict v;
      const bool i_shorter = periods[i] <= periods[j];
      v.shorter = i_shorter ? i : j;
      v.longer = i_shorter ? j : i;
      v.ratio = periods[v.shorter] / periods[v.longer];
      v.witness = rational_witness(v.ratio, max_denominator, tolerance);
      v.verdict = v.witness ? PairVerdict::commensurable : PairVerdict::incommensurable_at_depth;
      report.pairs.push_back(v);
    }
  }
  return report;
}

U1Phase holonomy_loop(std::span<const ConnectionSample> samples) {
  if (samples.size() < 2) throw DomainError("holonomy_loop needs at least two samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double s = samples[i].sigma;
    if (!std::isfinite(s) || s < 0.0 || s > kTwoPi) {
      throw DomainError("loop parameter out of [0, 2pi] at sample " + std::to_string(i));
    }
    if (i > 0 && !(s > samples[i - 1].sigma)) {
      throw DomainError("loop parameter not strictly increasing at sample " + std::to_string(i));
    }
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double width = samples[i].sigma - samples[i - 1].sigma;
    integral += 0.5 * width * (samples[i].value + samples[i - 1].value);
  }
  const auto& first = samples.front();
  const auto& last = samples.back();
  integral += 0.5 * (first.sigma + kTwoPi - last.sigma) * (first.value + last.value);
  return U1Phase(integral);
}

}  // namespace geophase
