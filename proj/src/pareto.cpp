#include "pooling/pareto.hpp"

#include <cmath>
#include <string>

#include "pooling/erlang.hpp"
#include "pooling/errors.hpp"
#include "pooling/exact_blocking.hpp"
#include "pooling/solve.hpp"

namespace pooling {
namespace {

constexpr double kResidualTol = 1e-12;

BlockingResult blocking_at(const SystemConfig& sys, SharingModel model, double x1, double x2) {
  return blocking(sys, SharingPoint::from_normalized(sys, model, x1, x2));
}

// Threshold on an edge where one coordinate is 1. `g` is B_i - reference along
// the free coordinate.
RootResult edge_threshold(const std::function<double(double)>& g, double tol) {
  RootResult r = bisect(g, 0.0, 1.0, tol, kResidualTol);
  const double glo = g(r.lo);
  // return the end of the bracket that is not QoS-improving (g >= 0)
  if (glo >= 0.0) {
    r.x = r.lo;
    r.residual = glo;
  } else {
    r.x = r.hi;
    r.residual = g(r.hi);
  }
  return r;
}

}  // namespace

std::string_view to_string(FrontierCase c) {
  switch (c) {
    case FrontierCase::BothBenefit: return "both_benefit";
    case FrontierCase::OnlyP1Benefits: return "only_p1_benefits";
    case FrontierCase::OnlyP2Benefits: return "only_p2_benefits";
  }
  return "?";
}

std::array<double, 2> standalone_blocking(const SystemConfig& sys, SharingModel model) {
  const BlockingResult b = blocking(sys, SharingPoint{model, {0.0, 0.0}});
  return {b.b1, b.b2};
}

bool is_qos_stable(const SystemConfig& sys, const SharingPoint& pt) {
  const BlockingResult b = blocking(sys, pt);
  const auto ref = standalone_blocking(sys, pt.model);
  return b.b1 < ref[0] && b.b2 < ref[1];
}

FrontierCase classify_case(const SystemConfig& sys) {
  sys.validate();
  const double e1 = erlang_b(sys.servers[0], sys.load(0));
  const double e2 = erlang_b(sys.servers[1], sys.load(1));
  const double pooled = erlang_b(sys.total_servers(), sys.load(0) + sys.load(1));
  if (pooled < e1 && pooled < e2) return FrontierCase::BothBenefit;
  if (e2 <= pooled && pooled < e1) return FrontierCase::OnlyP1Benefits;
  if (e1 <= pooled && pooled < e2) return FrontierCase::OnlyP2Benefits;
  throw InvariantError("classify_case: full pooling hurts both providers (pooled " +
                       std::to_string(pooled) + ", standalone " + std::to_string(e1) + ", " +
                       std::to_string(e2) + ")");
}

ParetoFrontier compute_frontier(const SystemConfig& sys, SharingModel model, double tol) {
  if (!(tol > 0.0)) throw DomainError("compute_frontier: tolerance must be positive");
  ParetoFrontier fr;
  fr.frontier_case = classify_case(sys);
  fr.model = model;
  fr.standalone = standalone_blocking(sys, model);
  fr.pooled = erlang_b(sys.total_servers(), sys.load(0) + sys.load(1));
  const double e1 = fr.standalone[0], e2 = fr.standalone[1];

  // B1 along (1, x2): decreasing in x2.   B2 along (x1, 1): decreasing in x1.
  // B2 along (1, x2): increasing in x2.   B1 along (x1, 1): increasing in x1.
  auto b1_on_right = [&](double x2) { return blocking_at(sys, model, 1.0, x2).b1 - e1; };
  auto b2_on_top = [&](double x1) { return blocking_at(sys, model, x1, 1.0).b2 - e2; };
  auto b2_on_right = [&](double x2) { return blocking_at(sys, model, 1.0, x2).b2 - e2; };
  auto b1_on_top = [&](double x1) { return blocking_at(sys, model, x1, 1.0).b1 - e1; };

  switch (fr.frontier_case) {
    case FrontierCase::BothBenefit: {
      const RootResult x1 = edge_threshold(b2_on_top, tol);
      const RootResult x2 = edge_threshold(b1_on_right, tol);
      fr.thresholds = {x1.x, x2.x};
      fr.residuals = {x1.residual, x2.residual};
      fr.iterations = x1.iterations + x2.iterations;
      fr.t_lo = x1.x;
      fr.t_hi = 2.0 - x2.x;
      break;
    }
    case FrontierCase::OnlyP1Benefits: {
      const RootResult lower = edge_threshold(b1_on_right, tol);
      RootResult upper;
      if (b2_on_right(1.0) <= 0.0) {
        upper.x = 1.0;  // pooled ties the standalone value: closure reaches (1,1)
        upper.residual = b2_on_right(1.0);
      } else {
        upper = edge_threshold(b2_on_right, tol);
      }
      fr.thresholds = {lower.x, upper.x};
      fr.residuals = {lower.residual, upper.residual};
      fr.iterations = lower.iterations + upper.iterations;
      fr.t_lo = 2.0 - upper.x;
      fr.t_hi = 2.0 - lower.x;
      break;
    }
    case FrontierCase::OnlyP2Benefits: {
      const RootResult lower = edge_threshold(b2_on_top, tol);
      RootResult upper;
      if (b1_on_top(1.0) <= 0.0) {
        upper.x = 1.0;
        upper.residual = b1_on_top(1.0);
      } else {
        upper = edge_threshold(b1_on_top, tol);
      }
      fr.thresholds = {lower.x, upper.x};
      fr.residuals = {lower.residual, upper.residual};
      fr.iterations = lower.iterations + upper.iterations;
      fr.t_lo = lower.x;
      fr.t_hi = upper.x;
      break;
    }
  }
  if (!(fr.t_lo < fr.t_hi)) throw InvariantError("compute_frontier: empty frontier arc");
  return fr;
}

std::array<double, 2> sweep_coordinates(double t) {
  if (!(t >= 0.0 && t <= 2.0))
    throw RangeError("sweep parameter " + std::to_string(t) + " outside [0, 2]");
  if (t <= 1.0) return {t, 1.0};
  return {1.0, 2.0 - t};
}

SharingPoint sweep_point(const SystemConfig& sys, SharingModel model, double t) {
  const auto x = sweep_coordinates(t);
  return SharingPoint::from_normalized(sys, model, x[0], x[1]);
}

SharingPoint sweep_point(const SystemConfig& sys, const ParetoFrontier& fr, double t) {
  if (!(t >= fr.t_lo && t <= fr.t_hi))
    throw RangeError("sweep parameter " + std::to_string(t) + " outside the frontier [" +
                     std::to_string(fr.t_lo) + ", " + std::to_string(fr.t_hi) + "]");
  return sweep_point(sys, fr.model, t);
}

}  // namespace pooling
