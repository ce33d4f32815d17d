#include "pooling/qed.hpp"

#include <algorithm>
#include <cmath>

#include "pooling/errors.hpp"
#include "pooling/normal.hpp"
#include "pooling/quadrature.hpp"

namespace pooling {
namespace {

constexpr double kQuadTol = 1e-12;
constexpr double kTailSigmas = 10.0;

}  // namespace

void QedParams::validate() const {
  for (int i = 0; i < 2; ++i) {
    if (!(alpha[i] > 0.0)) throw DomainError("qed: alpha must be positive");
    if (!(gamma[i] >= 0.0)) throw DomainError("qed: gamma must be nonnegative");
    if (!std::isfinite(beta[i])) throw DomainError("qed: beta must be finite");
  }
  if (!(n_scale >= 1.0)) throw DomainError("qed: scaling parameter must be >= 1");
}

QedParams map_finite_to_qed(const SystemConfig& sys, double k1, double k2) {
  sys.validate();
  SharingPoint::bounded_overflow(k1, k2).validate(sys);
  QedParams p;
  const double n1 = sys.servers[0], n2 = sys.servers[1];
  p.n_scale = n1;
  p.alpha = {1.0, n2 / n1};
  const std::array<double, 2> n{n1, n2};
  const std::array<double, 2> k{k1, k2};
  for (int i = 0; i < 2; ++i) {
    const double root = std::sqrt(n[i]);
    p.beta[i] = (sys.load(i) - n[i]) / root;
    p.gamma[i] = k[i] / root;
  }
  return p;
}

FiniteSystem finite_from_qed(const QedParams& p) {
  p.validate();
  FiniteSystem f;
  for (int i = 0; i < 2; ++i) {
    f.servers[i] = p.alpha[i] * p.n_scale;
    const double root = std::sqrt(f.servers[i]);
    f.load[i] = f.servers[i] + p.beta[i] * root;
    f.share[i] = p.gamma[i] * root;
  }
  return f;
}

QedTerms qed_terms(const QedParams& p) {
  p.validate();
  const double s1 = std::sqrt(p.alpha[0]), s2 = std::sqrt(p.alpha[1]);
  const double b1 = p.beta[0], b2 = p.beta[1];
  const double g1 = p.gamma[0], g2 = p.gamma[1];

  // Diagonal x1 + x2 = 0 runs over x1 in [-gamma1 sqrt(alpha1), gamma2 sqrt(alpha2)].
  const double lo = -g1 * s1, hi = g2 * s2;
  // Z1 is concentrated on b1 s1 +- 10 s1; the reflected Z2 factor on -b2 s2 +- 10 s2.
  const double z1_lo = (b1 - kTailSigmas) * s1, z1_hi = (b1 + kTailSigmas) * s1;
  const double z2_lo = (-b2 - kTailSigmas) * s2, z2_hi = (-b2 + kTailSigmas) * s2;

  auto diag_density = [&](double x) {
    return normal_pdf(x / s1 - b1) * normal_pdf(-x / s2 - b2);
  };
  auto diag_mass = [&](double x) { return normal_pdf(x / s1 - b1) * normal_cdf(-x / s2 - b2); };

  double line = 0.0;
  {
    const double a = std::max({lo, z1_lo, z2_lo});
    const double b = std::min({hi, z1_hi, z2_hi});
    if (b > a) line = adaptive_simpson(diag_density, a, b, kQuadTol) / (s1 * s2);
  }
  double area = 0.0;
  {
    const double a = std::max(lo, z1_lo);
    const double b = std::min(hi, z1_hi);
    if (b > a) area = adaptive_simpson(diag_mass, a, b, kQuadTol) / s1;
  }

  QedTerms t;
  // Edge where provider 1 is capped: x1 = gamma2 sqrt(alpha2), x2 <= -x1.
  t.a[0] = normal_pdf(g2 * s2 / s1 - b1) / s1 * normal_cdf(-g2 - b2) + line;
  // Edge where provider 2 is capped: x2 = gamma1 sqrt(alpha1), x1 <= -x2.
  t.a[1] = normal_pdf(g1 * s1 / s2 - b2) / s2 * normal_cdf(-g1 - b1) + line;
  // Region left of x1 = -gamma1 sqrt(alpha1), where only the cap on x2 binds,
  // plus the strip under the diagonal.
  t.g = normal_cdf(-g1 - b1) * normal_cdf(g1 * s1 / s2 - b2) + area;
  return t;
}

std::array<double, 2> qed_blocking(const QedParams& p) {
  const QedTerms t = qed_terms(p);
  if (!(t.g >= 1e-300)) throw NumericError("qed_blocking: limit normalizer G underflowed");
  const double scale = 1.0 / (std::sqrt(p.n_scale) * t.g);
  return {t.a[0] * scale, t.a[1] * scale};
}

double qed_full_pooling(const QedParams& p) {
  p.validate();
  const double s1 = std::sqrt(p.alpha[0]), s2 = std::sqrt(p.alpha[1]);
  const double total = p.alpha[0] + p.alpha[1];
  const double c = (p.beta[0] * s1 + p.beta[1] * s2) / std::sqrt(total);
  return normal_hazard(c) / std::sqrt(p.n_scale * total);
}

}  // namespace pooling
