#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "geophase/phase_sequence.hpp"

namespace geophase {

/// Two particles whose phase sequences were exchanged: both live on one
/// surface and share a horizon. The global phases Phi_a, Phi_b only enter the
/// measurement through the relative phase gamma_a = Phi_b - Phi_a.
class PairConfig {
 public:
  PairConfig(PhaseSequence a, PhaseSequence b);

  /// Pair built from one assignment with chain_b taken as given.
  static PairConfig exchanged(const SurfaceSpec& surface, const WindingChain& chain_a,
                              const WindingChain& chain_b, const CycleAssignment& assignment,
                              double horizon);

  const SurfaceSpec& surface() const noexcept { return a_.surface(); }
  const PhaseSequence& sequence_a() const noexcept { return a_; }
  const PhaseSequence& sequence_b() const noexcept { return b_; }
  double horizon() const noexcept { return a_.horizon(); }

  /// The same pair with the roles of a and b swapped.
  PairConfig swapped() const { return PairConfig(b_, a_); }

 private:
  PhaseSequence a_;
  PhaseSequence b_;
};

/// gamma_a(tau) = Phi_b(tau) - Phi_a(tau) and gamma_b = -gamma_a, in [0, 2pi).
class RelativePhase {
 public:
  explicit RelativePhase(const PairConfig& pair) : pair_(&pair) {}

  double gamma_a(double tau) const;
  double gamma_b(double tau) const;

 private:
  const PairConfig* pair_;
};

double relative_phase(const PairConfig& pair, double tau);

/// Detector response cos(theta + gamma).
double measure(double theta, double gamma);

struct AnglePair {
  double theta_a = 0.0;
  double theta_b = 0.0;

  friend bool operator==(const AnglePair&, const AnglePair&) = default;
};

/// E(theta_a, theta_b; t) = (2/t) int_0^t cos(theta_a + gamma_a) cos(theta_b + gamma_b).
///
/// `residual` is integrated separately as (1/t) int_0^t cos(theta_a - theta_b + 2 gamma_a),
/// so value - cos(theta_a + theta_b) - residual vanishes only up to rounding.
struct CorrelationEstimate {
  double theta_a = 0.0;
  double theta_b = 0.0;
  double horizon = 0.0;
  double value = 0.0;
  double residual = 0.0;
  std::size_t segment_count = 0;

  friend bool operator==(const CorrelationEstimate&, const CorrelationEstimate&) = default;
};

CorrelationEstimate correlation(const PairConfig& pair, double theta_a, double theta_b, double t);

/// Several settings in one pass over the segments, in input order.
std::vector<CorrelationEstimate> correlations(const PairConfig& pair,
                                              std::span<const AnglePair> settings, double t);

/// n x n settings with theta = 2 pi k / n, row-major in theta_a.
std::vector<AnglePair> uniform_angle_grid(std::size_t n);

struct ResidualPoint {
  double horizon = 0.0;
  double residual = 0.0;
};

/// Residual at each horizon (ascending) in a single forward pass.
std::vector<ResidualPoint> residual_curve(const PairConfig& pair, double theta_a, double theta_b,
                                          std::span<const double> horizons);

struct ChshSettings {
  double a1 = 0.0;
  double a2 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;

  /// Maximizes S for the cos(theta_a + theta_b) kernel: S = 2 sqrt(2).
  static ChshSettings canonical();

  friend bool operator==(const ChshSettings&, const ChshSettings&) = default;
};

/// S = E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2).
struct ChshResult {
  ChshSettings settings;
  std::array<CorrelationEstimate, 4> estimates;  ///< (a1,b1), (a1,b2), (a2,b1), (a2,b2)
  double s = 0.0;
};

ChshResult chsh(const PairConfig& pair, const ChshSettings& settings, double t);

}  // namespace geophase
