#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pooling/simulator.hpp"
#include "pooling/system.hpp"

namespace pooling {

/// Rejection of a scenario file, carrying the offending line and field.
class ScenarioError : public std::invalid_argument {
 public:
  ScenarioError(int line, std::string field, const std::string& what);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// A parsed scenario file.
///
/// The file is a list of `key = value` lines; `#` starts a comment. Each
/// provider i is given by `n<i>` plus exactly one of `lambda<i>` (arrival
/// rate) or `standalone_b<i>` (target standalone blocking, load recovered by
/// inverting Erlang-B). `mu<i>` defaults to 1. Probabilities are plain
/// numbers in (0,1) or carry an explicit `%` suffix. Optional keys: `model`
/// (prob | bo), `point` ("s1, s2": x_i or k_i per model) and the `sim.*`
/// settings seed, warmup, measured, replications, threads, holding1,
/// holding2 (exponential | deterministic | hyperexp(p, r1, r2) |
/// balanced_hyperexp(scv)).
struct Scenario {
  SystemConfig sys;
  std::array<std::optional<double>, 2> standalone_target;
  std::optional<SharingModel> model;
  std::optional<std::array<double, 2>> point;
  SimConfig sim;
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

}  // namespace pooling
