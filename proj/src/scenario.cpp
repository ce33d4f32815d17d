#include "pooling/scenario.hpp"

#include <cctype>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "pooling/erlang.hpp"
#include "pooling/errors.hpp"

namespace pooling {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Entry {
  std::string value;
  int line = 0;
};

class Fields {
 public:
  explicit Fields(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  int line(const std::string& key) const { return entries_.at(key).line; }
  const std::string& raw(const std::string& key) const { return entries_.at(key).value; }

  double number(const std::string& key) const {
    const Entry& e = entries_.at(key);
    return parse_number(e.value, e.line, key);
  }

  std::int64_t integer(const std::string& key) const {
    const Entry& e = entries_.at(key);
    std::int64_t v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
      throw ScenarioError(e.line, key, "expected an integer, got '" + e.value + "'");
    return v;
  }

  /// Plain number in (0,1), or a percentage with explicit suffix.
  double probability(const std::string& key) const {
    const Entry& e = entries_.at(key);
    std::string_view v = e.value;
    double scale = 1.0;
    if (!v.empty() && v.back() == '%') {
      v.remove_suffix(1);
      v = trim(v);
      scale = 0.01;
    }
    const double p = parse_number(v, e.line, key) * scale;
    if (!(p > 0.0 && p < 1.0))
      throw ScenarioError(e.line, key,
                          "probability must lie in (0,1); use a '%' suffix for percentages");
    return p;
  }

  static double parse_number(std::string_view text, int line, const std::string& key) {
    const std::string s(trim(text));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ScenarioError(line, key, "expected a number, got '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v))
      throw ScenarioError(line, key, "expected a number, got '" + s + "'");
    return v;
  }

 private:
  std::map<std::string, Entry> entries_;
};

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "n1",        "n2",          "lambda1",     "lambda2",          "mu1",
      "mu2",       "standalone_b1", "standalone_b2", "model",        "point",
      "sim.seed",  "sim.warmup",  "sim.measured", "sim.replications", "sim.threads",
      "sim.holding1", "sim.holding2"};
  return keys;
}

std::vector<double> parse_list(std::string_view text, int line, const std::string& key) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) out.push_back(Fields::parse_number(item, line, key));
  return out;
}

HoldingTime parse_holding(const std::string& value, int line, const std::string& key,
                          double mu) {
  const std::string_view v = trim(value);
  if (v == "exponential" || v == "exp") return HoldingTime::exponential();
  if (v == "deterministic" || v == "det") return HoldingTime::deterministic();
  const auto open = v.find('(');
  if (open != std::string_view::npos && v.back() == ')') {
    const std::string_view name = trim(v.substr(0, open));
    const auto args = parse_list(v.substr(open + 1, v.size() - open - 2), line, key);
    if (name == "hyperexp" && args.size() == 3)
      return HoldingTime::hyperexponential(args[0], args[1], args[2]);
    if (name == "balanced_hyperexp" && args.size() == 1) {
      try {
        return HoldingTime::balanced_hyperexponential(1.0 / mu, args[0]);
      } catch (const ConfigError& e) {
        throw ScenarioError(line, key, e.what());
      }
    }
  }
  throw ScenarioError(line, key, "unknown holding-time law '" + value + "'");
}

}  // namespace

ScenarioError::ScenarioError(int line, std::string field, const std::string& what)
    : std::invalid_argument("line " + std::to_string(line) + ", field '" + field + "': " + what),
      line_(line),
      field_(std::move(field)) {}

Scenario parse_scenario(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw_line;
  int line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string_view line = raw_line;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ScenarioError(line_no, std::string(line), "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
      throw ScenarioError(line_no, key, "unknown field");
    if (value.empty()) throw ScenarioError(line_no, key, "missing value");
    if (entries.count(key))
      throw ScenarioError(line_no, key,
                          "duplicate field (first given on line " +
                              std::to_string(entries[key].line) + ")");
    entries[key] = {value, line_no};
  }
  const Fields f(std::move(entries));

  Scenario sc;
  for (int i = 0; i < 2; ++i) {
    const std::string idx = std::to_string(i + 1);
    const std::string n_key = "n" + idx, l_key = "lambda" + idx, b_key = "standalone_b" + idx,
                      m_key = "mu" + idx;
    if (!f.has(n_key)) throw ScenarioError(0, n_key, "missing server count");
    const auto n = f.integer(n_key);
    if (n < 1 || n > 1'000'000) throw ScenarioError(f.line(n_key), n_key, "server count out of range");
    sc.sys.servers[i] = static_cast<int>(n);

    sc.sys.mu[i] = f.has(m_key) ? f.number(m_key) : 1.0;
    if (!(sc.sys.mu[i] > 0.0))
      throw ScenarioError(f.has(m_key) ? f.line(m_key) : 0, m_key, "service rate must be positive");

    const bool has_rate = f.has(l_key), has_target = f.has(b_key);
    if (has_rate == has_target)
      throw ScenarioError(has_rate ? f.line(b_key) : 0, has_rate ? b_key : l_key,
                          "give exactly one of " + l_key + " or " + b_key);
    if (has_rate) {
      sc.sys.lambda[i] = f.number(l_key);
      if (!(sc.sys.lambda[i] > 0.0))
        throw ScenarioError(f.line(l_key), l_key, "arrival rate must be positive");
    } else {
      const double target = f.probability(b_key);
      sc.standalone_target[i] = target;
      sc.sys.lambda[i] = invert_erlang_b(sc.sys.servers[i], target) * sc.sys.mu[i];
    }
  }

  if (f.has("model")) {
    try {
      sc.model = parse_sharing_model(f.raw("model"));
    } catch (const DomainError& e) {
      throw ScenarioError(f.line("model"), "model", e.what());
    }
  }
  if (f.has("point")) {
    const auto v = parse_list(f.raw("point"), f.line("point"), "point");
    if (v.size() != 2) throw ScenarioError(f.line("point"), "point", "expected two values 's1, s2'");
    sc.point = std::array<double, 2>{v[0], v[1]};
  }

  auto count = [&](const std::string& key, auto& dst, std::int64_t min_value) {
    if (!f.has(key)) return;
    const auto v = f.integer(key);
    if (v < min_value) throw ScenarioError(f.line(key), key, "value too small");
    dst = static_cast<std::remove_reference_t<decltype(dst)>>(v);
  };
  if (f.has("sim.seed")) {
    const auto v = f.integer("sim.seed");
    sc.sim.seed = static_cast<std::uint64_t>(v);
  }
  count("sim.warmup", sc.sim.warmup_arrivals, 0);
  count("sim.measured", sc.sim.measured_arrivals, 10'000);
  count("sim.replications", sc.sim.replications, 5);
  count("sim.threads", sc.sim.threads, 0);
  for (int i = 0; i < 2; ++i) {
    const std::string key = "sim.holding" + std::to_string(i + 1);
    if (f.has(key)) sc.sim.holding[i] = parse_holding(f.raw(key), f.line(key), key, sc.sys.mu[i]);
  }
  try {
    sc.sim.validate(sc.sys);
  } catch (const ConfigError& e) {
    throw ScenarioError(0, "sim", e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(0, "scenario", "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace pooling
