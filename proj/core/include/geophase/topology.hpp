#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace geophase {

/// Compact orientable surface of genus g. Its first homology is modeled as
/// Z^(2g) with a fixed basis of 2g cycles.
class SurfaceSpec {
 public:
  explicit SurfaceSpec(int genus);

  int genus() const noexcept { return genus_; }
  std::size_t basis_size() const noexcept { return 2 * static_cast<std::size_t>(genus_); }

  friend bool operator==(const SurfaceSpec&, const SurfaceSpec&) = default;

 private:
  int genus_;
};

/// Integer combination of basis cycles, sum_i m_i * gamma_i.
class WindingChain {
 public:
  WindingChain(const SurfaceSpec& surface, std::vector<std::int64_t> coefficients);

  static WindingChain zero(const SurfaceSpec& surface);

  std::span<const std::int64_t> coefficients() const noexcept { return coefficients_; }
  std::size_t size() const noexcept { return coefficients_.size(); }
  std::int64_t operator[](std::size_t i) const { return coefficients_.at(i); }

  bool is_zero() const noexcept;
  /// Number of nonzero coefficients.
  std::size_t active_count() const noexcept;

  WindingChain operator-() const;

  friend bool operator==(const WindingChain&, const WindingChain&) = default;

 private:
  explicit WindingChain(std::vector<std::int64_t> coefficients)
      : coefficients_(std::move(coefficients)) {}

  std::vector<std::int64_t> coefficients_;

  friend WindingChain chain_compose(const WindingChain& a, const WindingChain& b);
};

/// Componentwise sum of two chains on the same surface. Throws DimensionError
/// on a basis-size mismatch.
WindingChain chain_compose(const WindingChain& a, const WindingChain& b);

inline WindingChain operator+(const WindingChain& a, const WindingChain& b) {
  return chain_compose(a, b);
}

/// Swaps the coefficients of each basis pair (gamma_2k, gamma_2k+1). On a
/// genus-1 surface this maps (m, n) to (n, m).
WindingChain exchange_chain(const WindingChain& chain);

/// Per-cycle phase increments (radians, stored in [0, 2pi)) and periods.
class CycleAssignment {
 public:
  CycleAssignment(std::vector<double> betas, std::vector<double> periods);

  std::span<const double> betas() const noexcept { return betas_; }
  std::span<const double> periods() const noexcept { return periods_; }
  std::size_t size() const noexcept { return betas_.size(); }

  friend bool operator==(const CycleAssignment&, const CycleAssignment&) = default;

 private:
  std::vector<double> betas_;
  std::vector<double> periods_;
};

/// Element of U(1) stored by its angle in [0, 2pi).
class U1Phase {
 public:
  constexpr U1Phase() = default;
  explicit U1Phase(double radians);

  static U1Phase identity() { return U1Phase{}; }

  double angle() const noexcept { return angle_; }
  U1Phase inverse() const;

  friend U1Phase operator*(U1Phase a, U1Phase b);
  friend bool operator==(const U1Phase&, const U1Phase&) = default;

 private:
  double angle_ = 0.0;
};

/// Evaluates a chain against a cycle assignment: (sum_i m_i beta_i) mod 2pi.
/// A homomorphism from the chain group to U(1).
U1Phase pairing(const WindingChain& chain, const CycleAssignment& assignment);

struct RationalWitness {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  friend bool operator==(const RationalWitness&, const RationalWitness&) = default;
};

/// First continued-fraction convergent p/q of `ratio` (p >= 1, q <= max_denominator)
/// with |ratio - p/q| <= tolerance, if any.
std::optional<RationalWitness> rational_witness(double ratio, std::int64_t max_denominator,
                                                double tolerance);

enum class PairVerdict { commensurable, incommensurable_at_depth };

/// Verdict for one unordered pair of periods. The pair is reported in
/// canonical orientation: T[shorter] / T[longer] lies in (0, 1], and a
/// witness, when present, approximates exactly that ratio.
struct PeriodPairVerdict {
  std::size_t shorter = 0;
  std::size_t longer = 0;
  double ratio = 0.0;
  PairVerdict verdict = PairVerdict::incommensurable_at_depth;
  std::optional<RationalWitness> witness;
};

struct IncommensurabilityReport {
  std::int64_t max_denominator = 0;
  double tolerance = 0.0;
  std::vector<PeriodPairVerdict> pairs;

  bool all_incommensurable() const;
  /// Verdict for the unordered pair {i, j}; throws DomainError if absent.
  const PeriodPairVerdict& pair(std::size_t i, std::size_t j) const;
};

/// Depth-limited commensurability test of every pair of periods. A pair is
/// commensurable when a convergent with denominator <= max_denominator lands
/// within `tolerance` of the period ratio; otherwise it is only known to be
/// incommensurable up to that depth.
IncommensurabilityReport certify_incommensurable(const CycleAssignment& assignment,
                                                 std::int64_t max_denominator,
                                                 double tolerance);

struct ConnectionSample {
  double sigma = 0.0;  ///< loop parameter in [0, 2pi]
  double value = 0.0;  ///< connection component A(sigma)
};

/// Holonomy of a U(1) connection around the unit loop: trapezoidal quadrature
/// of A(sigma) over [0, 2pi) with a wrap-around panel back to the first sample.
U1Phase holonomy_loop(std::span<const ConnectionSample> samples);

}  // namespace geophase
