#include "geophase/correlation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "geophase/angle.hpp"
#include "geophase/errors.hpp"
#include "segment_walker.hpp"

namespace geophase {

namespace {

std::vector<detail::Channel> relative_channels(const PairConfig& pair) {
  auto channels = detail::channels_of(pair.sequence_a(), -1);
  auto b = detail::channels_of(pair.sequence_b(), +1);
  channels.insert(channels.end(), b.begin(), b.end());
  return channels;
}

void require_window(const PairConfig& pair, double t) {
  if (!(t > 0.0) || t > pair.horizon()) {
    throw DomainError(fmt::format("correlation horizon t = {} outside (0, {}]", t, pair.horizon()));
  }
}

struct SettingAccumulator {
  detail::CompensatedSum product;
  detail::CompensatedSum residual;
};

}  // namespace

PairConfig::PairConfig(PhaseSequence a, PhaseSequence b) : a_(std::move(a)), b_(std::move(b)) {
  if (!(a_.surface() == b_.surface())) throw DimensionError("pair sequences live on different surfaces");
  if (a_.horizon() != b_.horizon()) throw DomainError("pair sequences have different horizons");
}

PairConfig PairConfig::exchanged(const SurfaceSpec& surface, const WindingChain& chain_a,
                                 const WindingChain& chain_b, const CycleAssignment& assignment,
                                 double horizon) {
  return PairConfig(PhaseSequence(surface, chain_a, assignment, horizon),
                    PhaseSequence(surface, chain_b, assignment, horizon));
}

double RelativePhase::gamma_a(double tau) const {
  if (!(tau >= 0.0) || tau > pair_->horizon()) {
    throw DomainError(fmt::format("tau = {} outside [0, {}]", tau, pair_->horizon()));
  }
  return wrap_angle(phase_at(pair_->sequence_b(), tau) - phase_at(pair_->sequence_a(), tau));
}

double RelativePhase::gamma_b(double tau) const {
  if (!(tau >= 0.0) || tau > pair_->horizon()) {
    throw DomainError(fmt::format("tau = {} outside [0, {}]", tau, pair_->horizon()));
  }
  return wrap_angle(phase_at(pair_->sequence_a(), tau) - phase_at(pair_->sequence_b(), tau));
}

double relative_phase(const PairConfig& pair, double tau) { return RelativePhase(pair).gamma_a(tau); }

double measure(double theta, double gamma) { return std::cos(theta + gamma); }

std::vector<CorrelationEstimate> correlations(const PairConfig& pair,
                                              std::span<const AnglePair> settings, double t) {
  require_window(pair, t);
  std::vector<SettingAccumulator> acc(settings.size());
  detail::CompensatedSum length;
  detail::SegmentWalker walker(relative_channels(pair));
  walker.advance_to(t, [&](double len, double gamma) {
    length.add(len);
    for (std::size_t s = 0; s < settings.size(); ++s) {
      const auto& angles = settings[s];
      acc[s].product.add(len * measure(angles.theta_a, gamma) * measure(angles.theta_b, -gamma));
      acc[s].residual.add(len * std::cos(angles.theta_a - angles.theta_b + 2.0 * gamma));
    }
  });

  // C = t/2 normalizes the product integral so the cos(theta_a + theta_b)
  // term carries unit weight.
  const double total = length.value();
  std::vector<CorrelationEstimate> out;
  out.reserve(settings.size());
  for (std::size_t s = 0; s < settings.size(); ++s) {
    out.push_back(CorrelationEstimate{settings[s].theta_a, settings[s].theta_b, t,
                                      2.0 * acc[s].product.value() / total,
                                      acc[s].residual.value() / total, walker.segments()});
  }
  return out;
}

CorrelationEstimate correlation(const PairConfig& pair, double theta_a, double theta_b, double t) {
  const AnglePair setting{theta_a, theta_b};
  return correlations(pair, std::span(&setting, 1), t).front();
}

std::vector<AnglePair> uniform_angle_grid(std::size_t n) {
  std::vector<AnglePair> grid;
  grid.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      grid.push_back({kTwoPi * static_cast<double>(i) / static_cast<double>(n),
                      kTwoPi * static_cast<double>(j) / static_cast<double>(n)});
    }
  }
  return grid;
}

std::vector<ResidualPoint> residual_curve(const PairConfig& pair, double theta_a, double theta_b,
                                          std::span<const double> horizons) {
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    require_window(pair, horizons[k]);
    if (k > 0 && horizons[k] < horizons[k - 1]) {
      throw DomainError(fmt::format("residual horizons not sorted at index {}", k));
    }
  }
  const double phase_gap = theta_a - theta_b;
  detail::CompensatedSum integral;
  detail::CompensatedSum length;
  detail::SegmentWalker walker(relative_channels(pair));
  std::vector<ResidualPoint> curve;
  curve.reserve(horizons.size());
  for (double h : horizons) {
    walker.advance_to(h, [&](double len, double gamma) {
      integral.add(len * std::cos(phase_gap + 2.0 * gamma));
      length.add(len);
    });
    curve.push_back({h, integral.value() / length.value()});
  }
  return curve;
}

ChshSettings ChshSettings::canonical() { return {0.0, kPi / 2.0, 7.0 * kPi / 4.0, kPi / 4.0}; }

ChshResult chsh(const PairConfig& pair, const ChshSettings& settings, double t) {
  const std::array<AnglePair, 4> combos{{{settings.a1, settings.b1},
                                         {settings.a1, settings.b2},
                                         {settings.a2, settings.b1},
                                         {settings.a2, settings.b2}}};
  const auto estimates = correlations(pair, combos, t);
  ChshResult result;
  result.settings = settings;
  std::ranges::copy(estimates, result.estimates.begin());
  result.s = estimates[0].value + estimates[1].value + estimates[2].value - estimates[3].value;
  return result;
}

}  // namespace geophase
