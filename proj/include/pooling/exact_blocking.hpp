#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "pooling/system.hpp"

namespace pooling {

/// State-dependent admission rule for the two-provider system.
///
/// `admit[i][n]` is the probability that an arriving call of provider i is
/// admitted when n calls of provider i are in progress and the pooled system
/// is not full. Both sequences have length N1 + N2; a full system blocks
/// every arrival regardless of these values.
struct AcceptancePolicy {
  std::array<std::vector<double>, 2> admit;

  int capacity() const { return static_cast<int>(admit[0].size()); }
};

/// Stationary law pi(n1, n2) on the box [0, N1+N2]^2; entries outside the
/// feasible set {n1 + n2 <= N1 + N2, weight > 0} are exactly zero.
struct StationaryDistribution {
  Eigen::ArrayXXd prob;
  int capacity = 0;

  double operator()(int n1, int n2) const {
    return (n1 < 0 || n2 < 0 || n1 + n2 > capacity) ? 0.0 : prob(n1, n2);
  }
  bool feasible(int n1, int n2) const { return (*this)(n1, n2) > 0.0; }
  /// Marginal law of provider i's call count.
  Eigen::ArrayXd marginal(int i) const;
};

/// Admission rule realizing a sharing point. Throws DomainError when the
/// point is outside its model's range.
AcceptancePolicy policy_from_sharing(const SystemConfig& sys, const SharingPoint& pt);

/// Product-form stationary distribution
///   sigma(n) = prod_{j<n1} a1 admit[0][j] / (j+1) * prod_{j<n2} a2 admit[1][j] / (j+1)
/// normalized over n1 + n2 <= N1 + N2. Weights are formed in the log domain.
StationaryDistribution stationary_distribution(const SystemConfig& sys,
                                               const AcceptancePolicy& pol);

/// Per-call blocking read off a stationary distribution (Poisson arrivals
/// see time averages): B_i = 1 - sum_{n1+n2<N} admit[i][n_i] pi(n).
BlockingResult blocking_from_distribution(const SystemConfig& sys, const AcceptancePolicy& pol,
                                          const StationaryDistribution& dist);

/// Generic engine: blocking under an arbitrary admission policy. This is the
/// evaluator the rest of the library builds on.
BlockingResult blocking(const SystemConfig& sys, const AcceptancePolicy& pol);
BlockingResult blocking(const SystemConfig& sys, const SharingPoint& pt);

/// Closed form for probabilistic sharing, summing f1 f2 over the full-system
/// states and the states where provider i overflows.
BlockingResult blocking_probabilistic(const SystemConfig& sys, double x1, double x2);

/// Closed form for bounded-overflow sharing with real-valued k_i; the
/// fractional part randomizes admission of the last overflow call.
BlockingResult blocking_bounded_overflow(const SystemConfig& sys, double k1, double k2);

/// k with fractional part within 1e-12 of an integer is rounded to it.
double snap_share(double k);

}  // namespace pooling
