#pragma once

#include <cmath>
#include <numbers>

namespace cobotplan {

inline constexpr double kPi = std::numbers::pi;

/// Maps an angle to the half-open interval (-pi, pi].
inline double normalize_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

/// Signed difference b - a reduced to (-pi, pi].
inline double wrapped_difference(double a, double b) { return normalize_angle(b - a); }

}  // namespace cobotplan
