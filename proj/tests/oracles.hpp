#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the event clock or the segment integrators under test.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace geophase::oracle {

inline constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

inline double wrap(long double x) {
  long double r = std::fmod(x, kTwoPiL);
  if (r < 0) r += kTwoPiL;
  return static_cast<double>(r);
}

/// Shortest arc between two angles.
inline double arc(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
  return std::min(d, 2.0 * std::numbers::pi - d);
}

/// Completed windings by brute-force counting of multiples.
inline std::int64_t windings(double period, double tau) {
  std::int64_t n = 0;
  while (static_cast<double>(n + 1) * period <= tau) ++n;
  return n;
}

/// Phi(tau) summed in long double from brute-force winding counts.
inline double phase(const std::vector<std::int64_t>& m, const std::vector<double>& beta,
                    const std::vector<double>& period, double tau) {
  long double total = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    total += static_cast<long double>(m[i]) * static_cast<long double>(beta[i]) *
             static_cast<long double>(windings(period[i], tau));
  }
  return wrap(total);
}

/// (1/L) int_0^L exp(-i lambda s) ds by its power series sum (-i lambda L)^k / (k+1)!.
inline std::complex<double> oscillation_series(double lambda, double length) {
  const std::complex<double> z(0.0, -lambda * length);
  std::complex<double> term(1.0, 0.0);
  std::complex<double> sum(0.0, 0.0);
  for (int k = 0; k < 60; ++k) {
    term = (k == 0) ? std::complex<double>(1.0, 0.0) : term * z / static_cast<double>(k + 1);
    sum += term;
  }
  return sum;
}

}  // namespace geophase::oracle
