#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pooling/system.hpp"

namespace pooling {

/// Call holding-time law. Exponential and deterministic holding times take
/// their mean 1/mu_i from the system; the two-phase hyperexponential carries
/// its own branch rates, which must reproduce that mean.
struct HoldingTime {
  enum class Kind { Exponential, Deterministic, HyperExponential };

  Kind kind = Kind::Exponential;
  double p = 1.0;      // probability of branch 1 (hyperexponential)
  double rate1 = 1.0;  // branch rates (hyperexponential)
  double rate2 = 1.0;

  static HoldingTime exponential() { return {}; }
  static HoldingTime deterministic() { return {Kind::Deterministic}; }
  static HoldingTime hyperexponential(double p, double rate1, double rate2) {
    return {Kind::HyperExponential, p, rate1, rate2};
  }
  /// Balanced-means hyperexponential with the given mean and squared
  /// coefficient of variation (scv > 1).
  static HoldingTime balanced_hyperexponential(double mean, double scv);

  double mean(double mu) const;
  std::string describe() const;
};

struct SimConfig {
  std::uint64_t seed = 1;
  std::int64_t warmup_arrivals = 10'000;
  std::int64_t measured_arrivals = 100'000;
  int replications = 10;
  std::array<HoldingTime, 2> holding{};
  /// Worker threads for replications; 0 picks the hardware concurrency.
  int threads = 0;

  /// Throws ConfigError on fewer than 1e4 measured arrivals, fewer than 5
  /// replications, or holding-time parameters whose mean is not 1/mu_i.
  void validate(const SystemConfig& sys) const;
};

struct SimResult {
  std::array<double, 2> blocking{0.0, 0.0};
  double overall = 0.0;
  /// 99% Student-t half-widths over replication means.
  std::array<double, 2> half_width{0.0, 0.0};
  double overall_half_width = 0.0;
  std::uint64_t events = 0;
  double wall_seconds = 0.0;
  /// Largest call count seen per provider, over all replications.
  std::array<int, 2> max_calls{0, 0};
  std::vector<BlockingResult> per_replication;
};

/// Event-driven simulation of the pooled pair under the admission rule of
/// `pt`. Only the call counts (n1, n2) are tracked.
SimResult simulate(const SystemConfig& sys, const SharingPoint& pt, const SimConfig& cfg);

}  // namespace pooling
