#include "pooling/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <queue>
#include <random>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "pooling/errors.hpp"
#include "pooling/exact_blocking.hpp"

namespace pooling {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Replication {
  std::array<std::int64_t, 2> arrivals{0, 0};
  std::array<std::int64_t, 2> blocked{0, 0};
  std::uint64_t events = 0;
  std::array<int, 2> max_calls{0, 0};
};

class HoldingSampler {
 public:
  HoldingSampler(const HoldingTime& h, double mu) : h_(h), mean_(1.0 / mu), exp_mean_(mu) {}

  template <typename Rng>
  double operator()(Rng& rng) {
    switch (h_.kind) {
      case HoldingTime::Kind::Deterministic:
        return mean_;
      case HoldingTime::Kind::HyperExponential: {
        const double rate = unit_(rng) < h_.p ? h_.rate1 : h_.rate2;
        return std::exponential_distribution<double>(rate)(rng);
      }
      case HoldingTime::Kind::Exponential:
      default:
        return exp_mean_(rng);
    }
  }

 private:
  HoldingTime h_;
  double mean_;
  std::exponential_distribution<double> exp_mean_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

Replication run_replication(const SystemConfig& sys, const AcceptancePolicy& pol,
                            const std::array<int, 2>& caps, const SimConfig& cfg,
                            std::uint64_t stream) {
  std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(stream + 1)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double total_rate = sys.lambda[0] + sys.lambda[1];
  const double p_first = sys.lambda[0] / total_rate;
  std::exponential_distribution<double> interarrival(total_rate);
  std::array<HoldingSampler, 2> holding{HoldingSampler(cfg.holding[0], sys.mu[0]),
                                        HoldingSampler(cfg.holding[1], sys.mu[1])};

  using Departure = std::pair<double, int>;
  std::priority_queue<Departure, std::vector<Departure>, std::greater<>> departures;
  std::array<int, 2> calls{0, 0};
  const int capacity = sys.total_servers();

  Replication rep;
  double now = 0.0;
  const std::int64_t total_arrivals = cfg.warmup_arrivals + cfg.measured_arrivals;
  for (std::int64_t a = 0; a < total_arrivals; ++a) {
    now += interarrival(rng);
    while (!departures.empty() && departures.top().first <= now) {
      --calls[departures.top().second];
      departures.pop();
      ++rep.events;
    }
    ++rep.events;
    const int i = unit(rng) < p_first ? 0 : 1;
    bool admitted = false;
    if (calls[0] + calls[1] < capacity) {
      const double p = pol.admit[i][calls[i]];
      admitted = p >= 1.0 || (p > 0.0 && unit(rng) < p);
    }
    if (admitted) {
      ++calls[i];
      if (calls[0] + calls[1] > capacity || calls[i] > caps[i])
        throw InvariantError("simulate: admitted a call beyond the feasible state space");
      rep.max_calls[i] = std::max(rep.max_calls[i], calls[i]);
      departures.emplace(now + holding[i](rng), i);
    }
    if (a >= cfg.warmup_arrivals) {
      ++rep.arrivals[i];
      if (!admitted) ++rep.blocked[i];
    }
  }
  return rep;
}

double ratio(std::int64_t num, std::int64_t den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

}  // namespace

HoldingTime HoldingTime::balanced_hyperexponential(double mean, double scv) {
  if (!(mean > 0.0) || !(scv > 1.0))
    throw ConfigError("balanced hyperexponential needs mean > 0 and scv > 1");
  const double p = 0.5 * (1.0 + std::sqrt((scv - 1.0) / (scv + 1.0)));
  return hyperexponential(p, 2.0 * p / mean, 2.0 * (1.0 - p) / mean);
}

double HoldingTime::mean(double mu) const {
  if (kind == Kind::HyperExponential) return p / rate1 + (1.0 - p) / rate2;
  return 1.0 / mu;
}

std::string HoldingTime::describe() const {
  switch (kind) {
    case Kind::Exponential: return "exponential";
    case Kind::Deterministic: return "deterministic";
    case Kind::HyperExponential:
      return "hyperexp(" + std::to_string(p) + "," + std::to_string(rate1) + "," +
             std::to_string(rate2) + ")";
  }
  return "?";
}

void SimConfig::validate(const SystemConfig& sys) const {
  if (measured_arrivals < 10'000) throw ConfigError("simulate: need at least 1e4 measured arrivals");
  if (warmup_arrivals < 0) throw ConfigError("simulate: negative warmup");
  if (replications < 5) throw ConfigError("simulate: need at least 5 replications");
  for (int i = 0; i < 2; ++i) {
    const HoldingTime& h = holding[i];
    if (h.kind != HoldingTime::Kind::HyperExponential) continue;
    if (!(h.p > 0.0 && h.p < 1.0) || !(h.rate1 > 0.0) || !(h.rate2 > 0.0))
      throw ConfigError("simulate: hyperexponential needs 0 < p < 1 and positive rates");
    const double target = 1.0 / sys.mu[i];
    if (std::abs(h.mean(sys.mu[i]) - target) > 1e-12 * std::max(1.0, target))
      throw ConfigError("simulate: provider " + std::to_string(i + 1) +
                        " holding-time mean differs from 1/mu");
  }
}

SimResult simulate(const SystemConfig& sys, const SharingPoint& pt, const SimConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const AcceptancePolicy pol = policy_from_sharing(sys, pt);
  cfg.validate(sys);

  std::array<int, 2> caps{sys.total_servers(), sys.total_servers()};
  if (pt.model == SharingModel::BoundedOverflow) {
    for (int i = 0; i < 2; ++i)
      caps[i] = sys.servers[i] + static_cast<int>(std::ceil(snap_share(pt.share[1 - i])));
  }

  const int reps = cfg.replications;
  std::vector<Replication> results(reps);
  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, reps);
  if (threads == 1) {
    for (int r = 0; r < reps; ++r) results[r] = run_replication(sys, pol, caps, cfg, r);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int r = w; r < reps; r += threads) results[r] = run_replication(sys, pol, caps, cfg, r);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  SimResult out;
  std::array<std::vector<double>, 3> samples;
  for (const Replication& rep : results) {
    BlockingResult b;
    b.b1 = ratio(rep.blocked[0], rep.arrivals[0]);
    b.b2 = ratio(rep.blocked[1], rep.arrivals[1]);
    b.overall = ratio(rep.blocked[0] + rep.blocked[1], rep.arrivals[0] + rep.arrivals[1]);
    out.per_replication.push_back(b);
    samples[0].push_back(b.b1);
    samples[1].push_back(b.b2);
    samples[2].push_back(b.overall);
    out.events += rep.events;
    for (int i = 0; i < 2; ++i) out.max_calls[i] = std::max(out.max_calls[i], rep.max_calls[i]);
  }

  const boost::math::students_t dist(reps - 1);
  const double tq = boost::math::quantile(boost::math::complement(dist, 0.005));
  std::array<double, 3> mean{}, half{};
  for (int s = 0; s < 3; ++s) {
    double m = 0.0;
    for (double v : samples[s]) m += v;
    m /= reps;
    double ss = 0.0;
    for (double v : samples[s]) ss += (v - m) * (v - m);
    mean[s] = m;
    half[s] = tq * std::sqrt(ss / (reps - 1) / reps);
  }
  out.blocking = {mean[0], mean[1]};
  out.overall = mean[2];
  out.half_width = {half[0], half[1]};
  out.overall_half_width = half[2];
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace pooling
