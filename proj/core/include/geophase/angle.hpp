#pragma once

#include <cstdint>
#include <numbers>

namespace geophase {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle to [0, 2pi).
double wrap_angle(double radians);

/// Reduces an angle to (-pi, pi].
double signed_angle(double radians);

/// Shortest arc length between two angles, in [0, pi].
double circular_distance(double a, double b);

/// k * beta reduced to [0, 2pi).
///
/// The product is formed exactly (fma error term) and reduced against a
/// triple-double 2pi, so the result stays accurate to a few ulp of 2pi for
/// any int64 multiplier. Accumulated phases are built from this instead of
/// long chains of floating-point additions.
double scaled_angle(std::int64_t k, double beta);

}  // namespace geophase
