#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pooling {

// Standard normal helpers. Arguments are clamped to [-40, 40]; beyond that
// the cdf is saturated in double precision.
inline constexpr double kNormalClamp = 40.0;

inline double normal_pdf(double x) {
  x = std::clamp(x, -kNormalClamp, kNormalClamp);
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

inline double normal_cdf(double x) {
  x = std::clamp(x, -kNormalClamp, kNormalClamp);
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Upper tail 1 - Phi(x), evaluated without cancellation.
inline double normal_sf(double x) {
  x = std::clamp(x, -kNormalClamp, kNormalClamp);
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

/// Hazard rate phi(x) / (1 - Phi(x)) (inverse Mills ratio).
inline double normal_hazard(double x) {
  x = std::clamp(x, -kNormalClamp, kNormalClamp);
  if (x < 35.0) return normal_pdf(x) / normal_sf(x);
  // asymptotic tail expansion; both pdf and sf approach underflow here
  const double inv2 = 1.0 / (x * x);
  return x / (1.0 - inv2 * (1.0 - 3.0 * inv2 * (1.0 - 5.0 * inv2)));
}

}  // namespace pooling
