#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "geophase/phase_sequence.hpp"

namespace geophase {

/// Bohr mean (1/t) int_0^t exp(i Phi(tau)) dtau, summed exactly over the
/// constant pieces of Phi.
std::complex<double> bohr_mean(const PhaseSequence& seq, double t);

/// Fourier-Bohr coefficient (1/t) int_0^t exp(i Phi(tau)) exp(-i lambda tau) dtau.
/// Each constant piece is integrated in closed form; lambda = 0 gives bohr_mean.
std::complex<double> fourier_bohr_coefficient(const PhaseSequence& seq, double lambda, double t);

enum class ShiftSource { period_multiple, uniform_grid };

struct AlmostPeriodCandidate {
  double shift = 0.0;
  /// sup over tau in the window of |exp(i Phi(tau + shift)) - exp(i Phi(tau)) exp(i drift)|
  double discrepancy = 0.0;
  /// Fraction of the window where the shifted sequence is not reproduced.
  double mismatch_fraction = 0.0;
  ShiftSource source = ShiftSource::period_multiple;
};

/// Candidate shifts whose discrepancy is at most epsilon.
///
/// A shift reproduces the accumulated phase only up to the rotation built
/// up by whole windings over the shift, so the comparison removes the
/// constant drift sum_i m_i beta_i round(shift / T_i). The supremum is exact:
/// the discrepancy is evaluated once on every constant piece of the window.
struct AlmostPeriodReport {
  double epsilon = 0.0;
  double search_bound = 0.0;
  double sample_step = 0.0;
  double window = 0.0;  ///< tau ranges over [0, window)
  std::size_t shifts_examined = 0;
  std::vector<AlmostPeriodCandidate> candidates;  ///< ascending by shift
};

/// Scans shifts in (0, search_bound]: every multiple of an active period plus a
/// uniform grid of pitch sample_step. `window` defaults to horizon - search_bound.
AlmostPeriodReport find_almost_periods(const PhaseSequence& seq, double epsilon,
                                       double search_bound, double sample_step,
                                       double window = 0.0);

/// Discrepancy of a single shift over [0, window).
AlmostPeriodCandidate shift_discrepancy(const PhaseSequence& seq, double shift, double window);

struct RandomnessReport {
  double t = 0.0;
  std::size_t sample_count = 0;
  double monobit_p_value = 0.0;
  double serial_correlation = 0.0;
  double permutation_entropy = 0.0;
  std::string discretization;
};

/// Two-sided monobit p-value erfc(|S| / sqrt(2n)) of the bits [phase < pi].
double monobit_p_value(std::span<const double> phases);

/// |(1/(n-1)) sum_k z_k conj(z_{k+1})| with z_k = exp(i phase_k). Uncentered:
/// 1 for a constant sequence, O(n^-1/2) for independent uniform phases.
double serial_correlation(std::span<const double> phases);

/// Normalized (by ln 3!) entropy of order-3 ordinal patterns; ties rank by
/// position.
double permutation_entropy(std::span<const double> phases);

/// Phi sampled at tau_k = (k + 1) t / n, k = 0..n-1.
std::vector<double> sample_phases(const PhaseSequence& seq, double t, std::size_t n);

/// Samples Phi on the uniform grid above and runs the three statistics.
/// Requires n_samples >= 1000.
RandomnessReport randomness_battery(const PhaseSequence& seq, double t, std::size_t n_samples);

}  // namespace geophase
