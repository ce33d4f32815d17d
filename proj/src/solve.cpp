#include "pooling/solve.hpp"

#include <algorithm>
#include <string>

namespace pooling {

RootResult bisect(const std::function<double(double)>& g, double lo, double hi, double xtol,
                  double ftol, int max_iterations) {
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return {lo, 0.0, lo, lo, 0};
  if (ghi == 0.0) return {hi, 0.0, hi, hi, 0};
  if ((glo > 0.0) == (ghi > 0.0))
    throw BracketError("bisection: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");

  RootResult r;
  for (r.iterations = 1; r.iterations <= max_iterations; ++r.iterations) {
    const double mid = 0.5 * (lo + hi);
    if (!(lo < mid && mid < hi)) break;
    const double gm = g(mid);
    if (gm == 0.0) return {mid, 0.0, mid, mid, r.iterations};
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
      ghi = gm;
    }
    if (hi - lo <= xtol && std::max(std::abs(glo), std::abs(ghi)) <= ftol) break;
  }
  r.lo = lo;
  r.hi = hi;
  if (std::abs(glo) <= std::abs(ghi)) {
    r.x = lo;
    r.residual = glo;
  } else {
    r.x = hi;
    r.residual = ghi;
  }
  return r;
}

MaxResult golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                             double xtol, int max_iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  for (; it < max_iterations && b - a > xtol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  MaxResult best{c, fc, it};
  if (fd > best.value) best = {d, fd, it};
  for (double x : {lo, hi}) {
    const double v = f(x);
    if (v > best.value) best = {x, v, it};
  }
  return best;
}

}  // namespace pooling
