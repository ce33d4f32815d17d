#include "pooling/exact_blocking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pooling/errors.hpp"

namespace pooling {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSnapTol = 1e-12;

// Log of prod_{j<n} a * admit[j] / (j + 1) for n = 0..capacity.
Eigen::ArrayXd log_weights(double load, const std::vector<double>& admit, int capacity) {
  Eigen::ArrayXd lw(capacity + 1);
  lw(0) = 0.0;
  const double log_a = std::log(load);
  for (int n = 0; n < capacity; ++n) {
    const double p = admit[n];
    lw(n + 1) = (p > 0.0 && lw(n) > kNegInf) ? lw(n) + log_a + std::log(p) - std::log(n + 1.0)
                                             : kNegInf;
  }
  return lw;
}

// max over n1 + n2 <= capacity of lw1(n1) + lw2(n2).
double feasible_log_max(const Eigen::ArrayXd& lw1, const Eigen::ArrayXd& lw2, int capacity) {
  Eigen::ArrayXd prefix(capacity + 1);
  prefix(0) = lw2(0);
  for (int n = 1; n <= capacity; ++n) prefix(n) = std::max(prefix(n - 1), lw2(n));
  double m = kNegInf;
  for (int n1 = 0; n1 <= capacity; ++n1) m = std::max(m, lw1(n1) + prefix(capacity - n1));
  return m;
}

// Unnormalized weights exp(lw1 + lw2 - max) on the triangle, zero elsewhere.
// When the unconstrained maxima are close to the feasible one, the product of
// two exponentiated vectors is exact enough and much cheaper than one exp
// per state.
Eigen::ArrayXXd triangle_weights(const Eigen::ArrayXd& lw1, const Eigen::ArrayXd& lw2,
                                 int capacity) {
  const double m = feasible_log_max(lw1, lw2, capacity);
  if (!std::isfinite(m)) throw NumericError("stationary distribution: no feasible state");
  const double s1 = lw1.maxCoeff();
  const double s2 = lw2.maxCoeff();
  Eigen::ArrayXXd w = Eigen::ArrayXXd::Zero(capacity + 1, capacity + 1);
  if (s1 + s2 - m < 200.0) {
    const Eigen::ArrayXd e1 = (lw1 - s1).exp();
    const Eigen::ArrayXd e2 = (lw2 - s2).exp() * std::exp(s1 + s2 - m);
    for (int n1 = 0; n1 <= capacity; ++n1)
      w.row(n1).head(capacity - n1 + 1) = e1(n1) * e2.head(capacity - n1 + 1).transpose();
  } else {
    for (int n1 = 0; n1 <= capacity; ++n1)
      for (int n2 = 0; n1 + n2 <= capacity; ++n2) w(n1, n2) = std::exp(lw1(n1) + lw2(n2) - m);
  }
  return w;
}

void check_policy(const SystemConfig& sys, const AcceptancePolicy& pol) {
  const int cap = sys.total_servers();
  for (int i = 0; i < 2; ++i) {
    if (static_cast<int>(pol.admit[i].size()) != cap)
      throw DomainError("acceptance policy: sequence length must equal N1 + N2");
    for (double p : pol.admit[i])
      if (!(p >= 0.0 && p <= 1.0)) throw DomainError("acceptance policy: value outside [0, 1]");
  }
}

// Blocked mass for provider i: full states plus the refused share elsewhere.
BlockingResult blocking_from_weights(const SystemConfig& sys, const AcceptancePolicy& pol,
                                     const Eigen::ArrayXXd& w) {
  const int cap = sys.total_servers();
  double total = 0.0;
  std::array<double, 2> blocked{0.0, 0.0};
  for (int n1 = 0; n1 <= cap; ++n1) {
    for (int n2 = 0; n1 + n2 <= cap; ++n2) {
      const double p = w(n1, n2);
      if (p == 0.0) continue;
      total += p;
      if (n1 + n2 == cap) {
        blocked[0] += p;
        blocked[1] += p;
      } else {
        blocked[0] += (1.0 - pol.admit[0][n1]) * p;
        blocked[1] += (1.0 - pol.admit[1][n2]) * p;
      }
    }
  }
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericError("blocking: normalizing constant is not positive and finite");
  BlockingResult r;
  r.b1 = blocked[0] / total;
  r.b2 = blocked[1] / total;
  r.overall = overall_blocking(sys, r.b1, r.b2);
  return r;
}

double frac_part(double k) { return k - std::floor(k); }

}  // namespace

double snap_share(double k) {
  const double f = frac_part(k);
  if (f < kSnapTol) return std::floor(k);
  if (f > 1.0 - kSnapTol) return std::ceil(k);
  return k;
}

Eigen::ArrayXd StationaryDistribution::marginal(int i) const {
  return i == 0 ? prob.rowwise().sum().eval() : prob.colwise().sum().transpose().eval();
}

AcceptancePolicy policy_from_sharing(const SystemConfig& sys, const SharingPoint& pt) {
  sys.validate();
  pt.validate(sys);
  const int cap = sys.total_servers();
  AcceptancePolicy pol;
  for (int i = 0; i < 2; ++i) {
    const int own = sys.servers[i];
    const double other_share = pt.share[1 - i];
    auto& admit = pol.admit[i];
    admit.assign(cap, 0.0);
    if (pt.model == SharingModel::Probabilistic) {
      for (int n = 0; n < cap; ++n) admit[n] = n < own ? 1.0 : other_share;
    } else {
      const double k = snap_share(other_share);
      const int whole = static_cast<int>(std::floor(k));
      const double frac = k - whole;
      for (int n = 0; n < cap; ++n) {
        if (n < own + whole)
          admit[n] = 1.0;
        else if (n == own + whole)
          admit[n] = frac;
      }
    }
  }
  return pol;
}

StationaryDistribution stationary_distribution(const SystemConfig& sys,
                                               const AcceptancePolicy& pol) {
  sys.validate();
  check_policy(sys, pol);
  const int cap = sys.total_servers();
  const Eigen::ArrayXd lw1 = log_weights(sys.load(0), pol.admit[0], cap);
  const Eigen::ArrayXd lw2 = log_weights(sys.load(1), pol.admit[1], cap);
  StationaryDistribution dist;
  dist.capacity = cap;
  dist.prob = triangle_weights(lw1, lw2, cap);
  const double total = dist.prob.sum();
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericError("stationary distribution: normalizer underflowed");
  dist.prob /= total;
  return dist;
}

BlockingResult blocking_from_distribution(const SystemConfig& sys, const AcceptancePolicy& pol,
                                          const StationaryDistribution& dist) {
  check_policy(sys, pol);
  if (dist.capacity != sys.total_servers())
    throw DomainError("blocking: distribution does not match the system");
  return blocking_from_weights(sys, pol, dist.prob);
}

BlockingResult blocking(const SystemConfig& sys, const AcceptancePolicy& pol) {
  sys.validate();
  check_policy(sys, pol);
  const int cap = sys.total_servers();
  const Eigen::ArrayXd lw1 = log_weights(sys.load(0), pol.admit[0], cap);
  const Eigen::ArrayXd lw2 = log_weights(sys.load(1), pol.admit[1], cap);
  return blocking_from_weights(sys, pol, triangle_weights(lw1, lw2, cap));
}

BlockingResult blocking(const SystemConfig& sys, const SharingPoint& pt) {
  return blocking(sys, policy_from_sharing(sys, pt));
}

// ---------------------------------------------------------------------------
// Closed forms. These deliberately do not go through AcceptancePolicy: they
// transcribe the per-model weights f_i and the state sets directly.

namespace {

struct ClosedFormSums {
  double g = 0.0;
  std::array<double, 2> numer{0.0, 0.0};
};

template <typename InM, typename Numerator>
ClosedFormSums sum_states(int cap, const Eigen::ArrayXd& lf1, const Eigen::ArrayXd& lf2,
                          InM in_m, Numerator numer) {
  double m = kNegInf;
  for (int n1 = 0; n1 <= cap; ++n1)
    for (int n2 = 0; n1 + n2 <= cap; ++n2)
      if (in_m(n1, n2)) m = std::max(m, lf1(n1) + lf2(n2));
  if (!std::isfinite(m)) throw NumericError("closed form: no feasible state");
  ClosedFormSums s;
  for (int n1 = 0; n1 <= cap; ++n1) {
    for (int n2 = 0; n1 + n2 <= cap; ++n2) {
      if (!in_m(n1, n2)) continue;
      const double w = std::exp(lf1(n1) + lf2(n2) - m);
      s.g += w;
      for (int i = 0; i < 2; ++i) s.numer[i] += numer(i, n1, n2) * w;
    }
  }
  if (!(s.g > 0.0)) throw NumericError("closed form: normalizer underflowed");
  return s;
}

BlockingResult finish(const SystemConfig& sys, const ClosedFormSums& s) {
  BlockingResult r;
  r.b1 = s.numer[0] / s.g;
  r.b2 = s.numer[1] / s.g;
  r.overall = overall_blocking(sys, r.b1, r.b2);
  return r;
}

}  // namespace

BlockingResult blocking_probabilistic(const SystemConfig& sys, double x1, double x2) {
  sys.validate();
  SharingPoint::probabilistic(x1, x2).validate(sys);
  const int cap = sys.total_servers();
  const std::array<double, 2> x{x1, x2};

  // f_i(n) = a_i^n / n!, times x_{-i}^{n - N_i} once provider i overflows.
  std::array<Eigen::ArrayXd, 2> lf;
  for (int i = 0; i < 2; ++i) {
    lf[i].resize(cap + 1);
    const double log_a = std::log(sys.load(i));
    const double xo = x[1 - i];
    for (int n = 0; n <= cap; ++n) {
      double v = n * log_a - std::lgamma(n + 1.0);
      const int over = n - sys.servers[i];
      if (over > 0) v = xo > 0.0 ? v + over * std::log(xo) : kNegInf;
      lf[i](n) = v;
    }
  }

  auto in_m = [cap](int n1, int n2) { return n1 + n2 <= cap; };
  auto numer = [&](int i, int n1, int n2) {
    if (n1 + n2 == cap) return 1.0;  // R
    const int ni = i == 0 ? n1 : n2;
    if (ni >= sys.servers[i]) return 1.0 - x[1 - i];  // D_i
    return 0.0;
  };
  return finish(sys, sum_states(cap, lf[0], lf[1], in_m, numer));
}

BlockingResult blocking_bounded_overflow(const SystemConfig& sys, double k1, double k2) {
  sys.validate();
  SharingPoint::bounded_overflow(k1, k2).validate(sys);
  const int cap = sys.total_servers();
  const std::array<double, 2> k{snap_share(k1), snap_share(k2)};
  std::array<int, 2> lo{}, hi{};
  std::array<double, 2> frac{};
  for (int i = 0; i < 2; ++i) {
    lo[i] = static_cast<int>(std::floor(k[i]));
    hi[i] = static_cast<int>(std::ceil(k[i]));
    frac[i] = k[i] - lo[i];
  }

  // f_i(n) = a_i^n / n! up to N_i + floor(k_{-i}); one more state weighted by
  // the fractional part of k_{-i}.
  std::array<Eigen::ArrayXd, 2> lf;
  for (int i = 0; i < 2; ++i) {
    lf[i].resize(cap + 1);
    const double log_a = std::log(sys.load(i));
    const int full_cap = sys.servers[i] + lo[1 - i];
    for (int n = 0; n <= cap; ++n) {
      double v = n * log_a - std::lgamma(n + 1.0);
      if (n == full_cap + 1)
        v = frac[1 - i] > 0.0 ? v + std::log(frac[1 - i]) : kNegInf;
      else if (n > full_cap + 1)
        v = kNegInf;
      lf[i](n) = v;
    }
  }

  const int N1 = sys.servers[0], N2 = sys.servers[1];
  auto in_m = [&](int n1, int n2) {
    return n1 <= N1 + hi[1] && n2 <= N2 + hi[0] && n1 + n2 <= cap;
  };
  auto numer = [&](int i, int n1, int n2) {
    const int ni = i == 0 ? n1 : n2;
    const int nother = i == 0 ? n2 : n1;
    const int own = sys.servers[i], other = sys.servers[1 - i];
    const int c = hi[1 - i], f = lo[1 - i];
    double v = 0.0;
    if (n1 + n2 == cap) v += 1.0;                                  // R
    if (ni == own + c && nother < other - c) v += 1.0;             // C_i
    if (frac[1 - i] != 0.0 && ni == own + f && nother < other - f)  // D_i
      v += 1.0 - frac[1 - i];
    return v;
  };
  return finish(sys, sum_states(cap, lf[0], lf[1], in_m, numer));
}

}  // namespace pooling
