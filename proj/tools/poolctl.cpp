// poolctl: command-line front end for the pooling library.
//
//   poolctl block    --scenario S [--model prob|bo] [--point s1,s2]
//   poolctl pareto   --scenario S [--samples K] [--tol T]
//   poolctl bargain  --scenario S [--concepts nbs,ksbs,...]
//   poolctl qed      --scenario S [--point k1,k2 | --grid M]
//   poolctl simulate --scenario S [--point s1,s2] [--seed X]
//   poolctl invert-erlang --servers N --target P
//
// Output is one JSON object per line (or CSV with --out csv). Exit status:
// 0 success, 2 invalid input, 3 numeric failure.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "pooling/bargaining.hpp"
#include "pooling/erlang.hpp"
#include "pooling/errors.hpp"
#include "pooling/exact_blocking.hpp"
#include "pooling/pareto.hpp"
#include "pooling/qed.hpp"
#include "pooling/scenario.hpp"
#include "pooling/simulator.hpp"
#include "record.hpp"

using namespace pooling;
using poolctl::Format;
using poolctl::Record;
using poolctl::Writer;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct Common {
  std::string scenario;
  std::string model;
  std::string out = "jsonl";
  double tol = 1e-9;
  std::optional<std::uint64_t> seed;
  std::vector<double> point;
};

void add_common(CLI::App* cmd, Common& c, bool with_point) {
  cmd->add_option("--scenario", c.scenario, "scenario file (key = value lines)")->required();
  cmd->add_option("--model", c.model, "sharing model: prob or bo (overrides the scenario)")
      ->check(CLI::IsMember({"prob", "bo"}));
  cmd->add_option("--out", c.out, "output format")->check(CLI::IsMember({"jsonl", "csv"}));
  cmd->add_option("--tol", c.tol, "frontier tolerance in configuration space")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "simulation seed (overrides the scenario)");
  if (with_point)
    cmd->add_option("--point", c.point, "sharing point s1,s2 (x_i or k_i per model)")
        ->expected(2)
        ->delimiter(',');
}

struct Context {
  Scenario sc;
  SharingModel model = SharingModel::BoundedOverflow;
  Format format = Format::Jsonl;
};

Context load(const Common& c) {
  Context ctx;
  ctx.sc = load_scenario(c.scenario);
  if (!c.model.empty()) ctx.model = parse_sharing_model(c.model);
  else if (ctx.sc.model) ctx.model = *ctx.sc.model;
  ctx.format = c.out == "csv" ? Format::Csv : Format::Jsonl;
  return ctx;
}

SharingPoint point_of(const Common& c, const Context& ctx) {
  std::array<double, 2> s{};
  if (c.point.size() == 2) s = {c.point[0], c.point[1]};
  else if (ctx.sc.point) s = *ctx.sc.point;
  else throw DomainError("no sharing point: give --point or a 'point' line in the scenario");
  const SharingPoint pt{ctx.model, s};
  pt.validate(ctx.sc.sys);
  return pt;
}

void add_point(Record& r, const SystemConfig& sys, const SharingPoint& pt) {
  const auto x = pt.normalized(sys);
  r.add("s1", pt.share[0]).add("s2", pt.share[1]).add("x1", x[0]).add("x2", x[1]);
}

void add_blocking(Record& r, const BlockingResult& b) {
  r.add("b1", b.b1).add("b2", b.b2).add("b_overall", b.overall);
}

int cmd_block(const Common& c) {
  const Context ctx = load(c);
  const SharingPoint pt = point_of(c, ctx);
  const auto& sys = ctx.sc.sys;
  const BlockingResult b = blocking(sys, pt);
  const auto ref = standalone_blocking(sys, ctx.model);
  Record r;
  r.add("command", "block").add("model", to_string(ctx.model));
  add_point(r, sys, pt);
  add_blocking(r, b);
  r.add("standalone_b1", ref[0]).add("standalone_b2", ref[1]).add("qos_stable", is_qos_stable(sys, pt));
  Writer(ctx.format, stdout).write(r);
  return 0;
}

int cmd_pareto(const Common& c, int samples) {
  const Context ctx = load(c);
  const auto& sys = ctx.sc.sys;
  const ParetoFrontier fr = compute_frontier(sys, ctx.model, c.tol);
  Writer w(ctx.format, stdout);
  if (ctx.format == Format::Jsonl) {
    Record r;
    r.add("record", "frontier")
        .add("model", to_string(ctx.model))
        .add("case", to_string(fr.frontier_case))
        .add("threshold_1", fr.thresholds[0])
        .add("threshold_2", fr.thresholds[1])
        .add("t_lo", fr.t_lo)
        .add("t_hi", fr.t_hi)
        .add("standalone_b1", fr.standalone[0])
        .add("standalone_b2", fr.standalone[1])
        .add("pooled", fr.pooled)
        .add("residual_1", fr.residuals[0])
        .add("residual_2", fr.residuals[1])
        .add("iterations", fr.iterations);
    w.write(r);
  }
  // the whole boundary, with frontier membership flagged
  for (int j = 0; j < samples; ++j) {
    const double t = 2.0 * j / (samples - 1);
    const SharingPoint pt = sweep_point(sys, ctx.model, t);
    Record r;
    if (ctx.format == Format::Jsonl) r.add("record", "sweep");
    r.add("t", t);
    add_point(r, sys, pt);
    add_blocking(r, blocking(sys, pt));
    r.add("pareto", fr.contains(t));
    w.write(r);
  }
  return 0;
}

int cmd_bargain(const Common& c, const std::vector<std::string>& names, int grid) {
  const Context ctx = load(c);
  const auto& sys = ctx.sc.sys;
  std::vector<Concept> concepts;
  for (const auto& n : names) concepts.push_back(parse_concept(n));
  if (concepts.empty())
    concepts = {Concept::NBS,    Concept::KSBS,    Concept::ES,   Concept::US,
                Concept::LogNBS, Concept::LogKSBS, Concept::LogES};
  BargainingOptions opt;
  opt.frontier_tol = c.tol;
  opt.grid_points = grid;
  Writer w(ctx.format, stdout);
  for (Concept k : concepts) {
    const BargainingOutcome o = bargain(sys, ctx.model, k, opt);
    Record r;
    r.add("command", "bargain")
        .add("concept", to_string(k))
        .add("model", to_string(ctx.model))
        .add("case", to_string(o.frontier_case));
    add_point(r, sys, o.point);
    r.add("t", o.t);
    add_blocking(r, o.blocking);
    r.add("iterations", o.diagnostics.iterations)
        .add("residual", o.diagnostics.residual)
        .add("multimodal", o.diagnostics.multimodal)
        .add("tied_maxima", static_cast<int>(o.diagnostics.tied_maxima.size()))
        .add("numeric", o.diagnostics.numeric);
    w.write(r);
  }
  return 0;
}

Record qed_record(const SystemConfig& sys, double k1, double k2) {
  const QedParams p = map_finite_to_qed(sys, k1, k2);
  const auto approx = qed_blocking(p);
  const BlockingResult exact = blocking(sys, SharingPoint::bounded_overflow(k1, k2));
  Record r;
  r.add("command", "qed").add("k1", k1).add("k2", k2);
  r.add("n_scale", p.n_scale)
      .add("alpha1", p.alpha[0])
      .add("alpha2", p.alpha[1])
      .add("beta1", p.beta[0])
      .add("beta2", p.beta[1])
      .add("gamma1", p.gamma[0])
      .add("gamma2", p.gamma[1]);
  r.add("approx_b1", approx[0])
      .add("approx_b2", approx[1])
      .add("exact_b1", exact.b1)
      .add("exact_b2", exact.b2)
      .add("ratio_b1", exact.b1 / approx[0])
      .add("ratio_b2", exact.b2 / approx[1]);
  return r;
}

int cmd_qed(const Common& c, int grid) {
  const Context ctx = load(c);
  if (ctx.model != SharingModel::BoundedOverflow)
    throw DomainError("qed: the large-system approximation covers the bounded-overflow model only");
  const auto& sys = ctx.sc.sys;
  Writer w(ctx.format, stdout);
  if (grid > 0) {
    if (grid < 2) throw DomainError("qed: --grid needs at least 2 points per axis");
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j)
        w.write(qed_record(sys, sys.servers[0] * i / (grid - 1.0), sys.servers[1] * j / (grid - 1.0)));
    return 0;
  }
  const SharingPoint pt = point_of(c, ctx);
  Record r = qed_record(sys, pt.share[0], pt.share[1]);
  const double full_exact = erlang_b(sys.total_servers(), sys.load(0) + sys.load(1));
  const double full_approx = qed_full_pooling(map_finite_to_qed(sys, pt.share[0], pt.share[1]));
  r.add("full_pooling_approx", full_approx).add("full_pooling_exact", full_exact);
  w.write(r);
  return 0;
}

struct SimOverrides {
  std::optional<int> replications;
  std::optional<std::int64_t> measured;
  std::optional<std::int64_t> warmup;
  std::optional<int> threads;
};

int cmd_simulate(const Common& c, const SimOverrides& ov) {
  const Context ctx = load(c);
  const auto& sys = ctx.sc.sys;
  const SharingPoint pt = point_of(c, ctx);
  SimConfig cfg = ctx.sc.sim;
  if (c.seed) cfg.seed = *c.seed;
  if (ov.replications) cfg.replications = *ov.replications;
  if (ov.measured) cfg.measured_arrivals = *ov.measured;
  if (ov.warmup) cfg.warmup_arrivals = *ov.warmup;
  if (ov.threads) cfg.threads = *ov.threads;
  const SimResult res = simulate(sys, pt, cfg);
  const BlockingResult exact = blocking(sys, pt);

  Record r;
  r.add("command", "simulate").add("model", to_string(ctx.model));
  add_point(r, sys, pt);
  r.add("b1", res.blocking[0])
      .add("b2", res.blocking[1])
      .add("b_overall", res.overall)
      .add("half_width_b1", res.half_width[0])
      .add("half_width_b2", res.half_width[1])
      .add("half_width_overall", res.overall_half_width)
      .add("exact_b1", exact.b1)
      .add("exact_b2", exact.b2)
      .add("exact_b_overall", exact.overall)
      .add("events", static_cast<unsigned long long>(res.events))
      .add("max_calls_1", res.max_calls[0])
      .add("max_calls_2", res.max_calls[1])
      .add("seed", static_cast<unsigned long long>(cfg.seed))
      .add("replications", cfg.replications)
      .add("measured_arrivals", static_cast<long long>(cfg.measured_arrivals))
      .add("holding1", cfg.holding[0].describe())
      .add("holding2", cfg.holding[1].describe());
  Writer(ctx.format, stdout).write(r);
  return 0;
}

int cmd_invert(int servers, double target, const std::string& out) {
  const double a = invert_erlang_b(servers, target);
  Record r;
  r.add("command", "invert-erlang")
      .add("servers", servers)
      .add("target", target)
      .add("load", a)
      .add("blocking", erlang_b(servers, a));
  Writer(out == "csv" ? Format::Csv : Format::Jsonl, stdout).write(r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blocking, Pareto frontiers and bargaining for two pooled loss systems"};
  app.require_subcommand(1);

  Common common;

  auto* block = app.add_subcommand("block", "exact blocking at a sharing point");
  add_common(block, common, true);

  int samples = 201;
  auto* pareto = app.add_subcommand("pareto", "Pareto frontier and boundary sweep table");
  add_common(pareto, common, false);
  pareto->add_option("--samples", samples, "sweep points over t in [0, 2]")
      ->check(CLI::Range(2, 1000000));

  std::vector<std::string> concepts;
  int grid_points = 2001;
  auto* barg = app.add_subcommand("bargain", "bargaining solutions on the frontier");
  add_common(barg, common, false);
  barg->add_option("--concepts", concepts, "nbs, ksbs, es, us, lognbs, logksbs, loges")
      ->delimiter(',');
  barg->add_option("--grid", grid_points, "Nash grid points over t in [0, 2]")
      ->check(CLI::Range(3, 10000000));

  int qed_grid = 0;
  auto* qed = app.add_subcommand("qed", "large-system approximation against exact blocking");
  add_common(qed, common, true);
  qed->add_option("--grid", qed_grid, "emit an M x M table over all (k1, k2) instead");

  SimOverrides ov;
  auto* sim = app.add_subcommand("simulate", "discrete-event simulation with 99% intervals");
  add_common(sim, common, true);
  sim->add_option("--replications", ov.replications)->check(CLI::PositiveNumber);
  sim->add_option("--measured", ov.measured, "measured arrivals per replication");
  sim->add_option("--warmup", ov.warmup, "warm-up arrivals per replication");
  sim->add_option("--threads", ov.threads, "worker threads (0 = all cores)");

  int servers = 0;
  double target = 0.0;
  auto* inv = app.add_subcommand("invert-erlang", "offered load with a given Erlang-B blocking");
  inv->add_option("--servers", servers)->required();
  inv->add_option("--target", target, "blocking probability in (0, 1)")->required();
  inv->add_option("--out", common.out)->check(CLI::IsMember({"jsonl", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*block) return cmd_block(common);
    if (*pareto) return cmd_pareto(common, samples);
    if (*barg) return cmd_bargain(common, concepts, grid_points);
    if (*qed) return cmd_qed(common, qed_grid);
    if (*sim) return cmd_simulate(common, ov);
    if (*inv) return cmd_invert(servers, target, common.out);
  } catch (const ScenarioError& e) {
    std::fprintf(stderr, "poolctl: scenario: %s\n", e.what());
    return kExitInput;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "poolctl: numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const InvariantError& e) {
    std::fprintf(stderr, "poolctl: numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "poolctl: invalid input: %s\n", e.what());
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "poolctl: invalid input: %s\n", e.what());
    return kExitInput;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "poolctl: invalid input: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "poolctl: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitInput;
}
