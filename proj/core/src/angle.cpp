#include "geophase/angle.hpp"

#include <cmath>

namespace geophase {

namespace {

// 2pi as an unevaluated sum hi + mid + lo.
constexpr double kTwoPiHi = 0x1.921fb54442d18p+2;
constexpr double kTwoPiMid = 0x1.1a62633145c07p-52;
constexpr double kTwoPiLo = -0x1.f1976b7ed8fbcp-108;

constexpr std::int64_t kExactMultiplier = std::int64_t{1} << 52;
constexpr std::int64_t kSplit = std::int64_t{1} << 32;

double two_sum(double a, double b, double& err) {
  const double s = a + b;
  const double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
  return s;
}

}  // namespace

double wrap_angle(double radians) {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double signed_angle(double radians) {
  double r = wrap_angle(radians);
  if (r > kPi) r -= kTwoPi;
  return r;
}

double circular_distance(double a, double b) {
  return std::abs(signed_angle(a - b));
}

double scaled_angle(std::int64_t k, double beta) {
  if (k > kExactMultiplier || k < -kExactMultiplier) {
    // k = hi * 2^32 + lo, and beta * 2^32 is exact.
    const std::int64_t hi = k / kSplit;
    const std::int64_t lo = k - hi * kSplit;
    return wrap_angle(scaled_angle(hi, std::ldexp(beta, 32)) + scaled_angle(lo, beta));
  }
  const double kd = static_cast<double>(k);
  const double product = kd * beta;
  const double error = std::fma(kd, beta, -product);
  const double turns = std::nearbyint(product / kTwoPiHi);
  // product - turns * hi is exact; turns * mid is split exactly so that a
  // product near 2^66 still reduces to within a few ulps of 2pi.
  const double near = std::fma(-turns, kTwoPiHi, product);
  const double mid = turns * kTwoPiMid;
  const double mid_err = std::fma(turns, kTwoPiMid, -mid);
  double e1 = 0.0;
  double e2 = 0.0;
  double s = two_sum(near, -mid, e1);
  s = two_sum(s, error, e2);
  double tail = e1 + e2 - mid_err - turns * kTwoPiLo;
  // The quotient may be off by a few turns for large products.
  const double extra = std::nearbyint(s / kTwoPiHi);
  if (extra != 0.0) {
    s = std::fma(-extra, kTwoPiHi, s);
    tail -= extra * kTwoPiMid;
  }
  return wrap_angle(s + tail);
}

}  // namespace geophase
