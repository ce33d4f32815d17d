#pragma once

#include <functional>

namespace pooling {

/// Adaptive Simpson quadrature of `f` over [a, b] to absolute tolerance
/// `tol`, recursing at most `max_depth` levels.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 40);

}  // namespace pooling
