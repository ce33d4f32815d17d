#include <doctest.h>

#include <cmath>
#include <random>

#include "ctmc_oracle.hpp"
#include "pooling/erlang.hpp"
#include "pooling/errors.hpp"
#include "pooling/exact_blocking.hpp"

using namespace pooling;

TEST_CASE("policy_from_sharing") {
  const auto sys = SystemConfig::from_loads(3, 4, 2.0, 2.0);

  SUBCASE("no pooling") {
    const auto pol = policy_from_sharing(sys, SharingPoint::probabilistic(0, 0));
    REQUIRE(pol.capacity() == 7);
    for (int n = 0; n < 7; ++n) {
      CHECK(pol.admit[0][n] == (n < 3 ? 1.0 : 0.0));
      CHECK(pol.admit[1][n] == (n < 4 ? 1.0 : 0.0));
    }
  }
  SUBCASE("full pooling") {
    const auto pol = policy_from_sharing(sys, SharingPoint::bounded_overflow(3, 4));
    for (int i = 0; i < 2; ++i)
      for (double p : pol.admit[i]) CHECK(p == 1.0);
  }
  SUBCASE("fractional overflow bound") {
    const auto pol = policy_from_sharing(sys, SharingPoint::bounded_overflow(0, 2.5));
    const std::vector<double> expect{1, 1, 1, 1, 1, 0.5, 0};
    CHECK(pol.admit[0] == expect);
  }
  SUBCASE("probabilistic") {
    const auto pol = policy_from_sharing(sys, SharingPoint::probabilistic(0.25, 0.75));
    CHECK(pol.admit[0][2] == 1.0);
    CHECK(pol.admit[0][3] == 0.75);
    CHECK(pol.admit[1][4] == 0.25);
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS(policy_from_sharing(sys, SharingPoint::bounded_overflow(3.5, 0)), DomainError);
    CHECK_THROWS_AS(policy_from_sharing(sys, SharingPoint::bounded_overflow(-0.1, 0)), DomainError);
    CHECK_THROWS_AS(policy_from_sharing(sys, SharingPoint::probabilistic(1.1, 0)), DomainError);
  }
}

TEST_CASE("stationary distribution: full pooling by hand") {
  const auto sys = SystemConfig::from_loads(1, 1, 1.0, 1.0);
  const auto pol = policy_from_sharing(sys, SharingPoint::bounded_overflow(1, 1));
  const auto d = stationary_distribution(sys, pol);
  CHECK(d(0, 0) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(d(1, 0) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(d(0, 1) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(d(2, 0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(d(1, 1) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(d(0, 2) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(d(2, 1) == 0.0);
  CHECK(d.prob.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("stationary distribution: no pooling factorizes") {
  const auto sys = SystemConfig::from_loads(4, 6, 3.0, 5.5);
  const auto pol = policy_from_sharing(sys, SharingPoint::probabilistic(0, 0));
  const auto d = stationary_distribution(sys, pol);
  const auto m1 = d.marginal(0);
  const auto m2 = d.marginal(1);
  for (int n1 = 0; n1 <= 4; ++n1)
    for (int n2 = 0; n2 <= 6; ++n2) CHECK(d(n1, n2) == doctest::Approx(m1(n1) * m2(n2)).epsilon(1e-12));
  CHECK(m1(4) == doctest::Approx(erlang_b(4, 3.0)).epsilon(1e-12));
  CHECK(m2(6) == doctest::Approx(erlang_b(6, 5.5)).epsilon(1e-12));
  const auto b = blocking(sys, pol);
  CHECK(b.b1 == doctest::Approx(erlang_b(4, 3.0)).epsilon(1e-12));
  CHECK(b.b2 == doctest::Approx(erlang_b(6, 5.5)).epsilon(1e-12));
}

TEST_CASE("stationary distribution matches the CTMC solve") {
  auto compare = [](const SystemConfig& sys, const SharingPoint& pt) {
    const auto d = stationary_distribution(sys, policy_from_sharing(sys, pt));
    const auto o = oracle::solve_ctmc(sys, pt);
    const int cap = sys.total_servers();
    for (int n1 = 0; n1 <= cap; ++n1)
      for (int n2 = 0; n1 + n2 <= cap; ++n2) CHECK(std::abs(d(n1, n2) - o(n1, n2)) <= 1e-10);
  };
  compare(SystemConfig::from_loads(2, 2, 1.0, 1.0), SharingPoint::probabilistic(0.5, 0.3));
  compare(SystemConfig{{2, 2}, {1.3, 0.7}, {0.9, 1.4}}, SharingPoint::probabilistic(0.5, 0.3));
  compare(SystemConfig::from_loads(3, 3, 2.0, 2.0), SharingPoint::bounded_overflow(1.5, 2.5));
}

TEST_CASE("closed forms at the corners") {
  const SystemConfig sys{{7, 12}, {6.0, 9.0}, {1.0, 0.8}};
  const double e1 = erlang_b(7, sys.load(0)), e2 = erlang_b(12, sys.load(1));
  const double pooled = erlang_b(19, sys.load(0) + sys.load(1));

  auto p0 = blocking_probabilistic(sys, 0, 0);
  CHECK(p0.b1 == doctest::Approx(e1).epsilon(1e-12));
  CHECK(p0.b2 == doctest::Approx(e2).epsilon(1e-12));
  auto p1 = blocking_probabilistic(sys, 1, 1);
  CHECK(p1.b1 == doctest::Approx(pooled).epsilon(1e-12));
  CHECK(p1.b2 == doctest::Approx(pooled).epsilon(1e-12));

  auto k0 = blocking_bounded_overflow(sys, 0, 0);
  CHECK(k0.b1 == doctest::Approx(e1).epsilon(1e-12));
  CHECK(k0.b2 == doctest::Approx(e2).epsilon(1e-12));
  auto k1 = blocking_bounded_overflow(sys, 7, 12);
  CHECK(k1.b1 == doctest::Approx(pooled).epsilon(1e-12));
  CHECK(k1.b2 == doctest::Approx(pooled).epsilon(1e-12));

  CHECK_THROWS_AS(blocking_bounded_overflow(sys, 7.5, 0), DomainError);
  CHECK_THROWS_AS(blocking_probabilistic(sys, 0, -0.5), DomainError);
}

TEST_CASE("closed forms against the CTMC solve") {
  const auto sys = SystemConfig::from_loads(2, 2, 1.0, 1.0);
  const auto o = oracle::solve_ctmc(sys, SharingPoint::probabilistic(0.5, 0.5));
  const auto b = blocking_probabilistic(sys, 0.5, 0.5);
  CHECK(std::abs(b.b1 - o.blocking[0]) <= 1e-10);
  CHECK(std::abs(b.b2 - o.blocking[1]) <= 1e-10);

  const auto sys3 = SystemConfig::from_loads(3, 3, 2.0, 2.0);
  const auto of = oracle::solve_ctmc(sys3, SharingPoint::bounded_overflow(1.5, 2.5));
  const auto bf = blocking_bounded_overflow(sys3, 1.5, 2.5);
  CHECK(std::abs(bf.b1 - of.blocking[0]) <= 1e-10);
  CHECK(std::abs(bf.b2 - of.blocking[1]) <= 1e-10);
  // integer neighbours of the randomized point
  const auto lo = oracle::solve_ctmc(sys3, SharingPoint::bounded_overflow(1, 2));
  const auto hi = oracle::solve_ctmc(sys3, SharingPoint::bounded_overflow(2, 3));
  CHECK(std::abs(blocking_bounded_overflow(sys3, 1, 2).b1 - lo.blocking[0]) <= 1e-10);
  CHECK(std::abs(blocking_bounded_overflow(sys3, 2, 3).b2 - hi.blocking[1]) <= 1e-10);
}

TEST_CASE("closed forms, engine and CTMC agree on random instances") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> nd(1, 20);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    const int n1 = nd(rng);
    const int n2 = std::uniform_int_distribution<int>(1, 40 - n1)(rng);
    const SystemConfig sys{{n1, n2}, {0.2 + 2.0 * n1 * u(rng), 0.2 + 2.0 * n2 * u(rng)},
                           {0.5 + u(rng), 0.5 + u(rng)}};
    const double x1 = u(rng), x2 = u(rng);
    const auto pp = SharingPoint::probabilistic(x1, x2);
    const auto bp = SharingPoint::bounded_overflow(x1 * n1, x2 * n2);
    for (const auto& pt : {pp, bp}) {
      const auto engine = blocking(sys, pt);
      const auto closed = pt.model == SharingModel::Probabilistic
                              ? blocking_probabilistic(sys, x1, x2)
                              : blocking_bounded_overflow(sys, x1 * n1, x2 * n2);
      const auto ctmc = oracle::solve_ctmc(sys, pt);
      for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(engine[i] - closed[i]) <= 1e-10);
        CHECK(std::abs(engine[i] - ctmc.blocking[i]) <= 1e-10);
      }
    }
  }
}

TEST_CASE("bounded overflow: overflow-cap set never meets the full set") {
  // R = {n1 + n2 = N}; C_i = {n_i = N_i + ceil(k_-i), n_-i < N_-i - ceil(k_-i)}
  for (int N1 = 1; N1 <= 5; ++N1)
    for (int N2 = 1; N2 <= 5; ++N2)
      for (int c2 = 0; c2 <= N2; ++c2)
        for (int n2 = 0; n2 < N2 - c2; ++n2) {
          const int n1 = N1 + c2;
          CHECK(n1 + n2 < N1 + N2);
        }
}

TEST_CASE("bounded overflow is continuous at integer shares") {
  const auto sys = SystemConfig::from_loads(6, 9, 5.0, 8.5);
  for (int k1 = 0; k1 <= 6; ++k1) {
    for (int k2 : {0, 3, 9}) {
      const auto at = blocking_bounded_overflow(sys, k1, k2);
      const double h = 1e-11;
      if (k1 > 0) {
        const auto left = blocking_bounded_overflow(sys, k1 - h * 1e3, k2);
        CHECK(std::abs(left.b1 - at.b1) <= 1e-9);
        CHECK(std::abs(left.b2 - at.b2) <= 1e-9);
      }
      if (k1 < 6) {
        const auto right = blocking_bounded_overflow(sys, k1 + h * 1e3, k2);
        CHECK(std::abs(right.b1 - at.b1) <= 1e-9);
        CHECK(std::abs(right.b2 - at.b2) <= 1e-9);
      }
    }
  }
  // values within the snap tolerance collapse onto the integer
  CHECK(snap_share(3.0 + 1e-13) == 3.0);
  CHECK(snap_share(3.0 - 1e-13) == 3.0);
  CHECK(snap_share(3.25) == 3.25);
}

TEST_CASE("blocking depends on the workload only through the load") {
  const SystemConfig base{{8, 5}, {6.0, 4.5}, {1.0, 1.0}};
  for (double c : {0.25, 2.0, 1024.0}) {
    SystemConfig s = base;
    for (int i = 0; i < 2; ++i) {
      s.lambda[i] *= c;
      s.mu[i] *= c;
    }
    for (const auto& pt : {SharingPoint::probabilistic(0.3, 0.6), SharingPoint::bounded_overflow(2.5, 1.0)}) {
      const auto a = blocking(base, pt);
      const auto b = blocking(s, pt);
      CHECK(a.b1 == b.b1);
      CHECK(a.b2 == b.b2);
      CHECK(a.overall == b.overall);
    }
  }
}

TEST_CASE("overall_blocking") {
  const auto sys = SystemConfig::from_loads(3, 3, 1.0, 1.0);
  CHECK(overall_blocking(sys, 0.3, 0.3) == doctest::Approx(0.3));
  CHECK(overall_blocking(sys, 0.2, 0.0) == doctest::Approx(0.1));
  const SystemConfig skew{{3, 3}, {3.0, 1.0}, {1.0, 1.0}};
  CHECK(overall_blocking(skew, 0.1, 0.2) == doctest::Approx(0.125));
}

TEST_CASE("large systems stay finite") {
  const auto sys = SystemConfig::from_loads(400, 300, 390.0, 310.0);
  const auto b = blocking(sys, SharingPoint::bounded_overflow(50.5, 20.25));
  CHECK(std::isfinite(b.b1));
  CHECK(std::isfinite(b.b2));
  const auto c = blocking_bounded_overflow(sys, 50.5, 20.25);
  CHECK(std::abs(b.b1 - c.b1) <= 1e-10);
  CHECK(std::abs(b.b2 - c.b2) <= 1e-10);
  const auto p = blocking_probabilistic(sys, 0.4, 0.7);
  const auto q = blocking(sys, SharingPoint::probabilistic(0.4, 0.7));
  CHECK(std::abs(p.b1 - q.b1) <= 1e-10);
}

TEST_CASE("generic policy input is validated") {
  const auto sys = SystemConfig::from_loads(2, 2, 1.0, 1.0);
  AcceptancePolicy pol;
  pol.admit = {std::vector<double>(3, 1.0), std::vector<double>(4, 1.0)};
  CHECK_THROWS_AS(blocking(sys, pol), DomainError);
  pol.admit[0] = {1, 1, 1.5, 0};
  CHECK_THROWS_AS(blocking(sys, pol), DomainError);
}
