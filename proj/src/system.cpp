#include "pooling/system.hpp"

#include <cmath>
#include <string>

#include "pooling/errors.hpp"

namespace pooling {

void SystemConfig::validate() const {
  for (int i = 0; i < 2; ++i) {
    if (servers[i] < 1)
      throw DomainError("provider " + std::to_string(i + 1) + ": need at least one server");
    if (!(lambda[i] > 0.0) || !std::isfinite(lambda[i]))
      throw DomainError("provider " + std::to_string(i + 1) + ": arrival rate must be positive");
    if (!(mu[i] > 0.0) || !std::isfinite(mu[i]))
      throw DomainError("provider " + std::to_string(i + 1) + ": service rate must be positive");
  }
}

SystemConfig SystemConfig::from_loads(int n1, int n2, double a1, double a2) {
  SystemConfig sys;
  sys.servers = {n1, n2};
  sys.lambda = {a1, a2};
  sys.mu = {1.0, 1.0};
  sys.validate();
  return sys;
}

std::string_view to_string(SharingModel m) {
  return m == SharingModel::Probabilistic ? "prob" : "bo";
}

SharingModel parse_sharing_model(std::string_view s) {
  if (s == "prob" || s == "probabilistic") return SharingModel::Probabilistic;
  if (s == "bo" || s == "bounded-overflow" || s == "bounded_overflow")
    return SharingModel::BoundedOverflow;
  throw DomainError("unknown sharing model '" + std::string(s) + "' (expected prob or bo)");
}

SharingPoint SharingPoint::from_normalized(const SystemConfig& sys, SharingModel model,
                                           double x1, double x2) {
  if (model == SharingModel::Probabilistic) return probabilistic(x1, x2);
  return bounded_overflow(x1 * sys.servers[0], x2 * sys.servers[1]);
}

std::array<double, 2> SharingPoint::normalized(const SystemConfig& sys) const {
  if (model == SharingModel::Probabilistic) return share;
  return {share[0] / sys.servers[0], share[1] / sys.servers[1]};
}

void SharingPoint::validate(const SystemConfig& sys) const {
  for (int i = 0; i < 2; ++i) {
    const double hi = model == SharingModel::Probabilistic ? 1.0 : sys.servers[i];
    if (!(share[i] >= 0.0 && share[i] <= hi)) {
      const char* name = model == SharingModel::Probabilistic ? "x" : "k";
      throw DomainError(std::string(name) + std::to_string(i + 1) + " = " +
                        std::to_string(share[i]) + " outside [0, " + std::to_string(hi) + "]");
    }
  }
}

double overall_blocking(const SystemConfig& sys, double b1, double b2) {
  const double l1 = sys.lambda[0], l2 = sys.lambda[1];
  return (l1 * b1 + l2 * b2) / (l1 + l2);
}

}  // namespace pooling
