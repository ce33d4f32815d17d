#pragma once

#include <string_view>
#include <vector>

#include "pooling/pareto.hpp"
#include "pooling/system.hpp"

namespace pooling {

/// Bargaining solution concepts. Linear concepts use utilities -B_i; the Log*
/// concepts use log(B_i(0,0) / B_i).
enum class Concept { NBS, KSBS, ES, US, LogNBS, LogKSBS, LogES };

std::string_view to_string(Concept c);
Concept parse_concept(std::string_view s);

struct BargainingDiagnostics {
  int iterations = 0;
  /// Ratio concepts: |f - target| / target. Nash concepts: objective value.
  /// US: B_ov at the solution.
  double residual = 0.0;
  /// Nash concepts: more than one refined local maximum ties the best.
  bool multimodal = false;
  /// Nash concepts: sweep parameters of every refined maximum within 1e-12
  /// of the best objective (the chosen one included).
  std::vector<double> tied_maxima;
  /// US only: computed by numeric minimization because mu1 != mu2.
  bool numeric = false;
};

struct BargainingOutcome {
  Concept solution_concept = Concept::NBS;
  SharingPoint point;
  BlockingResult blocking;
  /// Position on the boundary sweep (see sweep_point).
  double t = 0.0;
  FrontierCase frontier_case = FrontierCase::BothBenefit;
  BargainingDiagnostics diagnostics;
};

struct BargainingOptions {
  int grid_points = 2001;       // Nash grid over t in [0, 2]
  double frontier_tol = 1e-9;
};

BargainingOutcome nash(const SystemConfig& sys, SharingModel model,
                       const BargainingOptions& opt = {});
BargainingOutcome kalai_smorodinsky(const SystemConfig& sys, SharingModel model,
                                    const BargainingOptions& opt = {});
BargainingOutcome egalitarian(const SystemConfig& sys, SharingModel model,
                              const BargainingOptions& opt = {});
BargainingOutcome utilitarian(const SystemConfig& sys, SharingModel model,
                              const BargainingOptions& opt = {});
/// `c` must be LogNBS, LogKSBS or LogES.
BargainingOutcome log_variant(const SystemConfig& sys, SharingModel model, Concept c,
                              const BargainingOptions& opt = {});

/// Dispatch on the concept tag.
BargainingOutcome bargain(const SystemConfig& sys, SharingModel model, Concept c,
                          const BargainingOptions& opt = {});

}  // namespace pooling
