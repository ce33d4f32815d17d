#pragma once

#include <array>
#include <string_view>

namespace pooling {

/// Two loss systems (providers 0 and 1) with Poisson arrivals.
struct SystemConfig {
  std::array<int, 2> servers{1, 1};
  std::array<double, 2> lambda{1.0, 1.0};  // arrival rates
  std::array<double, 2> mu{1.0, 1.0};      // 1 / mean holding time

  double load(int i) const { return lambda[i] / mu[i]; }
  int total_servers() const { return servers[0] + servers[1]; }

  /// Throws DomainError unless every count is >= 1 and every rate > 0.
  void validate() const;

  /// System with the given server counts and offered loads (mu = 1).
  static SystemConfig from_loads(int n1, int n2, double a1, double a2);
};

enum class SharingModel { Probabilistic, BoundedOverflow };

std::string_view to_string(SharingModel m);
/// Accepts "prob"/"probabilistic" and "bo"/"bounded-overflow".
SharingModel parse_sharing_model(std::string_view s);

/// A sharing configuration. `share[i]` is x_i in [0,1] for the
/// probabilistic model and k_i in [0, N_i] for bounded overflow: how much
/// provider i opens its servers to the other provider's overflow.
struct SharingPoint {
  SharingModel model = SharingModel::Probabilistic;
  std::array<double, 2> share{0.0, 0.0};

  static SharingPoint probabilistic(double x1, double x2) {
    return {SharingModel::Probabilistic, {x1, x2}};
  }
  static SharingPoint bounded_overflow(double k1, double k2) {
    return {SharingModel::BoundedOverflow, {k1, k2}};
  }
  /// Point of either model from normalized coordinates x_i in [0,1]
  /// (k_i = x_i N_i under bounded overflow).
  static SharingPoint from_normalized(const SystemConfig& sys, SharingModel model,
                                      double x1, double x2);

  /// x_i = k_i / N_i for bounded overflow, share itself otherwise.
  std::array<double, 2> normalized(const SystemConfig& sys) const;

  void validate(const SystemConfig& sys) const;
};

/// Steady-state blocking per provider plus the traffic-weighted overall value.
struct BlockingResult {
  double b1 = 0.0;
  double b2 = 0.0;
  double overall = 0.0;

  double operator[](int i) const { return i == 0 ? b1 : b2; }
};

/// (lambda1 b1 + lambda2 b2) / (lambda1 + lambda2).
double overall_blocking(const SystemConfig& sys, double b1, double b2);

}  // namespace pooling
