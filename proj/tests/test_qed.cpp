#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pooling/erlang.hpp"
#include "pooling/errors.hpp"
#include "pooling/exact_blocking.hpp"
#include "pooling/normal.hpp"
#include "pooling/qed.hpp"
#include "pooling/quadrature.hpp"
#include "test_systems.hpp"

using namespace pooling;

namespace {

QedParams params(std::array<double, 2> alpha, std::array<double, 2> beta,
                 std::array<double, 2> gamma, double n) {
  QedParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.n_scale = n;
  return p;
}

// Worst |exact/approx - 1| over a grid of feasible (k1, k2), N1 = N2 = n.
double worst_ratio_error(int n, int grid) {
  const auto sys = testsys::from_targets(n, n, 0.05, 0.01);
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double k1 = n * i / (grid - 1.0), k2 = n * j / (grid - 1.0);
      const auto exact = blocking_bounded_overflow(sys, k1, k2);
      const auto approx = qed_blocking(map_finite_to_qed(sys, k1, k2));
      worst = std::max({worst, std::abs(exact.b1 / approx[0] - 1.0),
                        std::abs(exact.b2 / approx[1] - 1.0)});
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("finite system to scaling parameters") {
  const auto p = map_finite_to_qed(SystemConfig::from_loads(100, 100, 100.0, 100.0), 0, 0);
  CHECK(p.alpha == std::array<double, 2>{1.0, 1.0});
  CHECK(p.beta == std::array<double, 2>{0.0, 0.0});
  CHECK(p.n_scale == 100.0);

  const auto q = map_finite_to_qed(SystemConfig::from_loads(200, 50, 190.0, 47.0), 20.0, 5.0);
  CHECK(q.alpha[1] == 0.25);

  const auto f = finite_from_qed(q);
  CHECK(f.servers[0] == doctest::Approx(200.0).epsilon(1e-14));
  CHECK(f.servers[1] == doctest::Approx(50.0).epsilon(1e-14));
  CHECK(f.load[0] == doctest::Approx(190.0).epsilon(1e-14));
  CHECK(f.load[1] == doctest::Approx(47.0).epsilon(1e-14));
  CHECK(f.share[0] == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(f.share[1] == doctest::Approx(5.0).epsilon(1e-14));

  CHECK_THROWS_AS(params({0.0, 1.0}, {0, 0}, {0, 0}, 10).validate(), DomainError);
  CHECK_THROWS_AS(params({1.0, 1.0}, {0, 0}, {-1, 0}, 10).validate(), DomainError);
  CHECK_THROWS_AS(params({1.0, 1.0}, {0, 0}, {0, 0}, 0.5).validate(), DomainError);
}

TEST_CASE("no sharing reduces to the single-system formula") {
  for (auto beta : {std::array<double, 2>{0.0, 0.0}, std::array<double, 2>{-1.2, 0.7},
                    std::array<double, 2>{2.0, -0.3}}) {
    const auto p = params({1.0, 0.4}, beta, {0.0, 0.0}, 150.0);
    const auto b = qed_blocking(p);
    for (int i = 0; i < 2; ++i) {
      const double expect = normal_hazard(beta[i]) / std::sqrt(p.n_scale * p.alpha[i]);
      CHECK(b[i] == doctest::Approx(expect).epsilon(1e-10));
      CHECK(b[i] == doctest::Approx(erlang_b_qed(p.n_scale * p.alpha[i], beta[i])).epsilon(1e-10));
    }
  }
}

TEST_CASE("unbounded sharing approaches full pooling") {
  for (auto beta : {std::array<double, 2>{0.0, 0.0}, std::array<double, 2>{-0.5, 1.0}}) {
    const auto p = params({1.0, 1.0}, beta, {10.0, 10.0}, 200.0);
    const auto b = qed_blocking(p);
    CHECK(b[0] == doctest::Approx(qed_full_pooling(p)).epsilon(1e-6));
    CHECK(b[1] == doctest::Approx(qed_full_pooling(p)).epsilon(1e-6));
  }
}

TEST_CASE("full pooling formula") {
  const auto p = params({1.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}, 50.0);
  CHECK(qed_full_pooling(p) == doctest::Approx(2.0 * normal_pdf(0.0) / std::sqrt(100.0)).epsilon(1e-14));

  const auto q = params({1.0, 0.6}, {0.4, -1.1}, {0.0, 0.0}, 300.0);
  const double c = (0.4 + -1.1 * std::sqrt(0.6)) / std::sqrt(1.6);
  CHECK(qed_full_pooling(q) == doctest::Approx(erlang_b_qed(300.0 * 1.6, c)).epsilon(1e-14));

  // 400 servers in aggregate
  const auto sys = SystemConfig::from_loads(200, 200, 195.0, 190.0);
  const double exact = erlang_b(400, 385.0);
  const double approx = qed_full_pooling(map_finite_to_qed(sys, 0, 0));
  CHECK(exact / approx >= 0.95);
  CHECK(exact / approx <= 1.05);
}

TEST_CASE("normalizer equals the Gaussian mass of the feasible region") {
  // Z_i ~ Normal(beta_i sqrt(alpha_i), alpha_i); region x1 <= g2 sqrt(a2),
  // x2 <= g1 sqrt(a1), x1 + x2 <= 0.
  const auto p = params({1.0, 0.25}, {0.3, -0.6}, {0.5, 1.5}, 100.0);
  const double s1 = std::sqrt(p.alpha[0]), s2 = std::sqrt(p.alpha[1]);
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> z1(p.beta[0] * s1, s1), z2(p.beta[1] * s2, s2);
  const int n = 10'000'000;
  int hits = 0;
  for (int k = 0; k < n; ++k) {
    const double x1 = z1(rng), x2 = z2(rng);
    hits += (x1 <= p.gamma[1] * s2 && x2 <= p.gamma[0] * s1 && x1 + x2 <= 0.0);
  }
  const double mc = static_cast<double>(hits) / n;
  const double sigma = std::sqrt(mc * (1.0 - mc) / n);
  const double g = qed_terms(p).g;
  CHECK(std::abs(g - mc) <= 3.0 * sigma);

  // the transposed limits give a visibly different number here
  auto mass = [&](double x) { return normal_pdf(x / s1 - p.beta[0]) * normal_cdf(-x / s2 - p.beta[1]); };
  const double transposed =
      normal_cdf(-p.gamma[0] - p.beta[0]) * normal_cdf(p.gamma[0] * s1 / s2 - p.beta[1]) +
      adaptive_simpson(mass, -p.gamma[0] * s2, p.gamma[1] * s1, 1e-12) / s1;
  CHECK(std::abs(transposed - mc) > 10.0 * sigma);
}

TEST_CASE("limit terms are positive and continuous in the sharing levels") {
  const double d = 1e-6;
  for (double g1 = 0.0; g1 <= 10.0; g1 += 0.5) {
    for (double g2 = 0.0; g2 <= 10.0; g2 += 0.5) {
      const auto t = qed_terms(params({1.0, 0.5}, {0.2, -0.4}, {g1, g2}, 1.0));
      const auto u = qed_terms(params({1.0, 0.5}, {0.2, -0.4}, {g1 + d, g2 + d}, 1.0));
      for (int i = 0; i < 2; ++i) {
        const double r = t.a[i] / t.g;
        CHECK(r > 0.0);
        CHECK(std::isfinite(r));
        CHECK(std::abs(u.a[i] / u.g - r) <= 1e-4 * r);
      }
    }
  }
}

TEST_CASE("approximation converges along the square-root scaling") {
  // Fixed (alpha, beta, gamma); the relative error should fall like 1/sqrt(N).
  QedParams p = params({1.0, 0.5}, {0.3, -0.8}, {0.7, 1.2}, 1.0);
  std::array<double, 2> prev{1.0, 1.0};
  for (double n : {100.0, 400.0, 1600.0, 6400.0}) {
    p.n_scale = n;
    const auto f = finite_from_qed(p);
    const auto sys = SystemConfig::from_loads(static_cast<int>(std::lround(f.servers[0])),
                                              static_cast<int>(std::lround(f.servers[1])),
                                              f.load[0], f.load[1]);
    const auto exact = blocking_bounded_overflow(sys, f.share[0], f.share[1]);
    const auto approx = qed_blocking(p);
    const std::array<double, 2> err{std::abs(exact.b1 / approx[0] - 1.0),
                                    std::abs(exact.b2 / approx[1] - 1.0)};
    for (int i = 0; i < 2; ++i) {
      CHECK(err[i] < 0.6 * prev[i]);
      prev[i] = err[i];
    }
  }
  CHECK(prev[0] < 0.01);
  CHECK(prev[1] < 0.01);
}

TEST_CASE("degenerate regime is reported") {
  CHECK_THROWS_AS(qed_blocking(params({1.0, 1.0}, {60.0, 60.0}, {0.0, 0.0}, 100.0)), NumericError);
}

TEST_CASE("approximation error at N = 200 and its trend") {
  // Worst case is provider 2 at (k1, k2) = (10, 0): exact/approx = 0.9127,
  // slightly beyond the 8% usually quoted for this size. Pinned as regression.
  CHECK(worst_ratio_error(200, 21) == doctest::Approx(0.08728).epsilon(1e-3));
  double prev = 1.0;
  for (int n : {50, 100, 200, 400}) {
    const double e = worst_ratio_error(n, 11);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("adaptive Simpson") {
  CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13) ==
        doctest::Approx(std::numbers::e - 1.0).epsilon(1e-12));
  CHECK(adaptive_simpson([](double x) { return normal_pdf(x); }, -10.0, 10.0, 1e-13) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(adaptive_simpson([](double) { return 1.0; }, 2.0, 2.0, 1e-12) == 0.0);
}
