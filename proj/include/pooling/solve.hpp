#pragma once

#include <cmath>
#include <functional>

#include "pooling/errors.hpp"

namespace pooling {

struct RootResult {
  double x = 0.0;         // accepted root estimate
  double residual = 0.0;  // g(x)
  double lo = 0.0;        // final bracket, g(lo) and g(hi) of opposite sign
  double hi = 0.0;
  int iterations = 0;
};

/// Bisection for a sign change of `g` on [lo, hi]. Stops once the bracket
/// is narrower than `xtol` and |g| <= `ftol` at both ends, or when the
/// bracket cannot shrink further. The bracket end with the smaller |g| is
/// returned; `lo`/`hi` keep the final bracket for callers that need a side.
RootResult bisect(const std::function<double(double)>& g, double lo, double hi, double xtol,
                  double ftol, int max_iterations = 400);

struct MaxResult {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section search for a maximum of `f` inside [lo, hi].
MaxResult golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                             double xtol, int max_iterations = 200);

}  // namespace pooling
