#include "pooling/erlang.hpp"

#include <cmath>
#include <string>

#include "pooling/errors.hpp"
#include "pooling/normal.hpp"

namespace pooling {

double erlang_b(int servers, double load) {
  if (servers < 0) throw DomainError("erlang_b: negative server count");
  if (!(load > 0.0) || !std::isfinite(load))
    throw DomainError("erlang_b: offered load must be positive and finite");
  double e = 1.0;
  for (int n = 1; n <= servers; ++n) {
    const double ae = load * e;
    e = ae / (n + ae);
  }
  return e;
}

double invert_erlang_b(int servers, double target) {
  if (servers < 1) throw DomainError("invert_erlang_b: need at least one server");
  if (!(target > 0.0 && target < 1.0))
    throw DomainError("invert_erlang_b: target must lie in (0, 1), got " + std::to_string(target));

  constexpr int kMaxIterations = 200;
  constexpr double kRelTol = 1e-12;

  double lo = 1e-9;
  double hi = std::max(1.0, static_cast<double>(servers));
  while (erlang_b(servers, hi) <= target) hi *= 2.0;
  if (erlang_b(servers, lo) >= target) return lo;

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxIterations; ++it) {
    mid = 0.5 * (lo + hi);
    if (!(lo < mid && mid < hi)) break;
    const double e = erlang_b(servers, mid);
    if (std::abs(e - target) <= kRelTol * target) return mid;
    if (e < target)
      lo = mid;
    else
      hi = mid;
  }
  return mid;
}

double erlang_b_qed(double servers, double beta) {
  if (!(servers >= 1.0)) throw DomainError("erlang_b_qed: need servers >= 1");
  return normal_hazard(beta) / std::sqrt(servers);
}

}  // namespace pooling
