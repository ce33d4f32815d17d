#pragma once

#include <array>

#include "pooling/system.hpp"

namespace pooling {

/// Square-root (QED) scaling of the bounded-overflow system:
///   N_i = alpha_i N,  a_i = N_i + beta_i sqrt(N_i),  k_i = gamma_i sqrt(N_i).
struct QedParams {
  std::array<double, 2> alpha{1.0, 1.0};
  std::array<double, 2> beta{0.0, 0.0};
  std::array<double, 2> gamma{0.0, 0.0};
  double n_scale = 1.0;

  void validate() const;
};

/// Finite system recovered from scaling parameters (server counts real-valued).
struct FiniteSystem {
  std::array<double, 2> servers{};
  std::array<double, 2> load{};
  std::array<double, 2> share{};
};

/// N = N1, alpha = (1, N2/N1), beta_i = (a_i - N_i)/sqrt(N_i), gamma_i = k_i/sqrt(N_i).
QedParams map_finite_to_qed(const SystemConfig& sys, double k1, double k2);
FiniteSystem finite_from_qed(const QedParams& p);

/// Limit densities behind the approximation: B_i ~ A_i / (G sqrt(N)).
/// A_i is the Gaussian line integral over the full-system diagonal and the
/// edge where provider i hits its overflow cap; G is the probability that
/// (Z1, Z2), Z_i ~ Normal(beta_i sqrt(alpha_i), alpha_i), lies in the
/// scaled feasible region.
struct QedTerms {
  std::array<double, 2> a{0.0, 0.0};
  double g = 0.0;
};

QedTerms qed_terms(const QedParams& p);

/// Approximate per-provider blocking. Throws NumericError when G < 1e-300.
std::array<double, 2> qed_blocking(const QedParams& p);

/// Full-pooling approximation with the aggregated staffing margin
/// c = (beta1 sqrt(alpha1) + beta2 sqrt(alpha2)) / sqrt(alpha1 + alpha2).
double qed_full_pooling(const QedParams& p);

}  // namespace pooling
