#pragma once

#include <array>
#include <string_view>

#include "pooling/system.hpp"

namespace pooling {

/// Which providers gain from full pooling.
///  BothBenefit:    E(N1+N2, a1+a2) <  E(N1,a1) and <  E(N2,a2)
///  OnlyP1Benefits: E(N2,a2) <= E(N1+N2, a1+a2) < E(N1,a1)
///  OnlyP2Benefits: E(N1,a1) <= E(N1+N2, a1+a2) < E(N2,a2)
enum class FrontierCase { BothBenefit, OnlyP1Benefits, OnlyP2Benefits };

std::string_view to_string(FrontierCase c);

/// Pareto-efficient sharing configurations, in normalized coordinates.
///
/// The frontier is always an open arc of the boundary sweep (see
/// `sweep_point`) with parameter t in (t_lo, t_hi):
///   BothBenefit:    thresholds = (x^1, x^2); frontier {(x,1): x > x^1} U {(1,x): x > x^2}
///   OnlyP1Benefits: thresholds = (lower x2, upper x2); frontier {(1,x): lower < x < upper}
///   OnlyP2Benefits: thresholds = (lower x1, upper x1); frontier {(x,1): lower < x < upper}
struct ParetoFrontier {
  FrontierCase frontier_case = FrontierCase::BothBenefit;
  SharingModel model = SharingModel::Probabilistic;
  std::array<double, 2> thresholds{0.0, 0.0};
  double t_lo = 0.0;
  double t_hi = 2.0;
  /// Disagreement-point blocking B_i(0,0) (equal to E(N_i, a_i)).
  std::array<double, 2> standalone{0.0, 0.0};
  /// E(N1 + N2, a1 + a2).
  double pooled = 0.0;
  /// B - E at each threshold, for the equation that defines it.
  std::array<double, 2> residuals{0.0, 0.0};
  int iterations = 0;

  bool contains(double t) const { return t_lo < t && t < t_hi; }
};

/// Blocking at the no-sharing point, through the same evaluator as every
/// other configuration so that comparisons against it are exact.
std::array<double, 2> standalone_blocking(const SystemConfig& sys, SharingModel model);

/// Both providers strictly better off than without sharing.
bool is_qos_stable(const SystemConfig& sys, const SharingPoint& pt);

/// Throws InvariantError if pooling would hurt both providers.
FrontierCase classify_case(const SystemConfig& sys);

/// Frontier thresholds by bisection along the edges x1 = 1 / x2 = 1.
/// Throws BracketError when a threshold equation has no sign change.
ParetoFrontier compute_frontier(const SystemConfig& sys, SharingModel model, double tol = 1e-9);

/// Boundary of the configuration square traversed clockwise from (0,1)
/// through (1,1) to (1,0): t in [0,1] -> (t, 1); t in (1,2] -> (1, 2 - t).
std::array<double, 2> sweep_coordinates(double t);
SharingPoint sweep_point(const SystemConfig& sys, SharingModel model, double t);
/// As above, restricted to the closure [t_lo, t_hi] of a frontier.
SharingPoint sweep_point(const SystemConfig& sys, const ParetoFrontier& fr, double t);

}  // namespace pooling
