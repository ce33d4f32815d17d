#include "pooling/bargaining.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>

#include "pooling/errors.hpp"
#include "pooling/exact_blocking.hpp"
#include "pooling/solve.hpp"

namespace pooling {
namespace {

constexpr double kRatioTol = 1e-9;
constexpr double kTieTol = 1e-12;
constexpr double kFlatRel = 1e-14;
constexpr int kMonotoneChecks = 101;
constexpr double kFlatTol = 1e-12;

enum class Utility { Linear, Log };

// One bargaining instance: the frontier plus the disagreement point.
class Problem {
 public:
  Problem(const SystemConfig& sys, SharingModel model, const BargainingOptions& opt)
      : sys_(sys), model_(model), frontier_(compute_frontier(sys, model, opt.frontier_tol)) {}

  const SystemConfig& sys() const { return sys_; }
  const ParetoFrontier& frontier() const { return frontier_; }

  BlockingResult at(double t) const { return blocking(sys_, sweep_point(sys_, model_, t)); }
  BlockingResult at_normalized(double x1, double x2) const {
    return blocking(sys_, SharingPoint::from_normalized(sys_, model_, x1, x2));
  }

  std::array<double, 2> gains(const BlockingResult& b, Utility u) const {
    const auto& e = frontier_.standalone;
    if (u == Utility::Linear) return {e[0] - b.b1, e[1] - b.b2};
    return {std::log(e[0] / b.b1), std::log(e[1] / b.b2)};
  }

  BargainingOutcome outcome(Concept c, double t) const {
    BargainingOutcome out;
    out.solution_concept = c;
    out.t = t;
    out.point = sweep_point(sys_, model_, t);
    out.blocking = blocking(sys_, out.point);
    out.frontier_case = frontier_.frontier_case;
    return out;
  }

 private:
  SystemConfig sys_;
  SharingModel model_;
  ParetoFrontier frontier_;
};

// Frontier point where gain1 / gain2 equals `target`. The ratio is strictly
// decreasing along the clockwise sweep, from +inf at t_lo to 0 at t_hi.
BargainingOutcome solve_ratio(const Problem& p, Concept c, Utility u, double target) {
  const ParetoFrontier& fr = p.frontier();
  auto ratio = [&](double t) {
    const auto g = p.gains(p.at(t), u);
    return g[0] / g[1];
  };

  // Far along an edge the blocking values stop moving in double precision,
  // so adjacent samples may tie; they must never increase, and the ratio must
  // fall across the arc as a whole.
  double prev = std::numeric_limits<double>::infinity();
  double first = prev;
  for (int j = 1; j < kMonotoneChecks - 1; ++j) {
    const double t = fr.t_lo + (fr.t_hi - fr.t_lo) * j / (kMonotoneChecks - 1);
    const double f = ratio(t);
    if (j == 1) first = f;
    if (!(f <= prev + kFlatTol * std::abs(prev)))
      throw InvariantError(std::string(to_string(c)) +
                           ": gain ratio increases along the frontier at t = " + std::to_string(t));
    prev = f;
  }
  if (!(prev < first))
    throw InvariantError(std::string(to_string(c)) + ": gain ratio is flat along the frontier");

  // Full pooling is checked first: it is where symmetric and matched systems
  // land, and it should come back as exactly (1,1).
  if (fr.contains(1.0) && std::abs(ratio(1.0) - target) <= kRatioTol * target) {
    BargainingOutcome out = p.outcome(c, 1.0);
    out.diagnostics.residual = std::abs(ratio(1.0) - target) / target;
    return out;
  }

  auto h = [&](double t) {
    const auto g = p.gains(p.at(t), u);
    return g[0] - target * g[1];
  };
  const RootResult r = bisect(h, fr.t_lo, fr.t_hi, 0.0, 0.0);
  BargainingOutcome out = p.outcome(c, r.x);
  out.diagnostics.iterations = r.iterations;
  out.diagnostics.residual = std::abs(ratio(r.x) - target) / target;
  return out;
}

// Global maximizer of [g1]+ [g2]+ over the whole boundary: a uniform grid
// followed by golden-section refinement around every grid-local maximum.
BargainingOutcome solve_nash(const Problem& p, Concept c, Utility u, int grid_points) {
  if (grid_points < 3) throw DomainError("nash: need at least 3 grid points");
  auto objective = [&](double t) {
    const auto g = p.gains(p.at(t), u);
    return std::max(g[0], 0.0) * std::max(g[1], 0.0);
  };
  const int n = grid_points;
  std::vector<double> ts(n), vals(n);
  for (int j = 0; j < n; ++j) {
    ts[j] = 2.0 * j / (n - 1);
    vals[j] = objective(ts[j]);
  }

  struct Peak {
    double t;
    double value;
  };
  std::vector<Peak> peaks;
  int evaluations = n;
  for (int j = 0; j < n; ++j) {
    if (!(vals[j] > 0.0)) continue;
    // plateaus (values equal in double precision) count once, at their right end
    const bool left_ok = j == 0 || vals[j] >= vals[j - 1];
    const bool right_ok = j == n - 1 || vals[j] > vals[j + 1];
    if (!(left_ok && right_ok)) continue;
    const double lo = ts[std::max(j - 1, 0)];
    const double hi = ts[std::min(j + 1, n - 1)];
    const MaxResult m = golden_section_max(objective, lo, hi, 1e-12);
    evaluations += m.iterations + 4;
    // refinement must strictly improve on the grid point to move it
    if (m.value > vals[j]) peaks.push_back({m.x, m.value});
    else peaks.push_back({ts[j], vals[j]});
  }
  if (peaks.empty())
    throw NumericError(std::string(to_string(c)) + ": no configuration improves on no sharing");

  auto best = std::max_element(peaks.begin(), peaks.end(),
                               [](const Peak& a, const Peak& b) { return a.value < b.value; });
  // Where the objective is flat to rounding, its maximizers are indistinguishable;
  // take the one nearest full pooling so the choice does not depend on the labels.
  Peak chosen = *best;
  const double flat = best->value * (1.0 - kFlatRel);
  auto consider = [&](double t, double v) {
    if (v >= flat && std::abs(t - 1.0) < std::abs(chosen.t - 1.0)) chosen = {t, v};
  };
  for (const Peak& pk : peaks) consider(pk.t, pk.value);
  for (int j = 0; j < n; ++j) consider(ts[j], vals[j]);
  best->t = chosen.t;
  BargainingOutcome out = p.outcome(c, best->t);
  out.diagnostics.iterations = evaluations;
  out.diagnostics.residual = best->value;
  for (const Peak& pk : peaks) {
    if (pk.value < best->value - kTieTol) continue;
    const bool seen = std::any_of(out.diagnostics.tied_maxima.begin(),
                                  out.diagnostics.tied_maxima.end(),
                                  [&](double t) { return std::abs(t - pk.t) < 1e-6; });
    if (!seen) out.diagnostics.tied_maxima.push_back(pk.t);
  }
  out.diagnostics.multimodal = out.diagnostics.tied_maxima.size() > 1;
  return out;
}

}  // namespace

std::string_view to_string(Concept c) {
  switch (c) {
    case Concept::NBS: return "nbs";
    case Concept::KSBS: return "ksbs";
    case Concept::ES: return "es";
    case Concept::US: return "us";
    case Concept::LogNBS: return "lognbs";
    case Concept::LogKSBS: return "logksbs";
    case Concept::LogES: return "loges";
  }
  return "?";
}

Concept parse_concept(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  for (Concept c : {Concept::NBS, Concept::KSBS, Concept::ES, Concept::US, Concept::LogNBS,
                    Concept::LogKSBS, Concept::LogES})
    if (lower == to_string(c)) return c;
  throw DomainError("unknown bargaining concept '" + std::string(s) + "'");
}

BargainingOutcome nash(const SystemConfig& sys, SharingModel model, const BargainingOptions& opt) {
  return solve_nash(Problem(sys, model, opt), Concept::NBS, Utility::Linear, opt.grid_points);
}

BargainingOutcome kalai_smorodinsky(const SystemConfig& sys, SharingModel model,
                                    const BargainingOptions& opt) {
  const Problem p(sys, model, opt);
  // Ideal points: each provider shares nothing while the other shares everything.
  const auto g1 = p.gains(p.at_normalized(0.0, 1.0), Utility::Linear);
  const auto g2 = p.gains(p.at_normalized(1.0, 0.0), Utility::Linear);
  return solve_ratio(p, Concept::KSBS, Utility::Linear, g1[0] / g2[1]);
}

BargainingOutcome egalitarian(const SystemConfig& sys, SharingModel model,
                              const BargainingOptions& opt) {
  return solve_ratio(Problem(sys, model, opt), Concept::ES, Utility::Linear, 1.0);
}

BargainingOutcome utilitarian(const SystemConfig& sys, SharingModel model,
                              const BargainingOptions& opt) {
  const Problem p(sys, model, opt);
  const ParetoFrontier& fr = p.frontier();
  if (sys.mu[0] == sys.mu[1]) {
    double t = 1.0;
    if (fr.frontier_case == FrontierCase::OnlyP1Benefits) t = fr.t_lo;       // (1, upper x2)
    else if (fr.frontier_case == FrontierCase::OnlyP2Benefits) t = fr.t_hi;  // (upper x1, 1)
    BargainingOutcome out = p.outcome(Concept::US, t);
    out.diagnostics.residual = out.blocking.overall;
    return out;
  }

  // No closed form when holding times differ: minimize B_ov over the closure.
  auto neg_overall = [&](double t) { return -p.at(t).overall; };
  const int n = std::max(opt.grid_points, 3);
  double best_t = fr.t_lo, best_v = neg_overall(fr.t_lo);
  int best_j = 0;
  for (int j = 1; j < n; ++j) {
    const double t = fr.t_lo + (fr.t_hi - fr.t_lo) * j / (n - 1);
    const double v = neg_overall(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
      best_j = j;
    }
  }
  const double step = (fr.t_hi - fr.t_lo) / (n - 1);
  const double lo = std::max(fr.t_lo, fr.t_lo + (best_j - 1) * step);
  const double hi = std::min(fr.t_hi, fr.t_lo + (best_j + 1) * step);
  const MaxResult m = golden_section_max(neg_overall, lo, hi, 1e-12);
  if (m.value > best_v) best_t = m.x;
  BargainingOutcome out = p.outcome(Concept::US, best_t);
  out.diagnostics.numeric = true;
  out.diagnostics.iterations = n + m.iterations;
  out.diagnostics.residual = out.blocking.overall;
  return out;
}

BargainingOutcome log_variant(const SystemConfig& sys, SharingModel model, Concept c,
                              const BargainingOptions& opt) {
  const Problem p(sys, model, opt);
  switch (c) {
    case Concept::LogNBS:
      return solve_nash(p, c, Utility::Log, opt.grid_points);
    case Concept::LogKSBS: {
      const auto g1 = p.gains(p.at_normalized(0.0, 1.0), Utility::Log);
      const auto g2 = p.gains(p.at_normalized(1.0, 0.0), Utility::Log);
      return solve_ratio(p, c, Utility::Log, g1[0] / g2[1]);
    }
    case Concept::LogES:
      return solve_ratio(p, c, Utility::Log, 1.0);
    default:
      throw DomainError("log_variant: expects lognbs, logksbs or loges");
  }
}

BargainingOutcome bargain(const SystemConfig& sys, SharingModel model, Concept c,
                          const BargainingOptions& opt) {
  switch (c) {
    case Concept::NBS: return nash(sys, model, opt);
    case Concept::KSBS: return kalai_smorodinsky(sys, model, opt);
    case Concept::ES: return egalitarian(sys, model, opt);
    case Concept::US: return utilitarian(sys, model, opt);
    default: return log_variant(sys, model, c, opt);
  }
}

}  // namespace pooling
