#include "regcalc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace regcalc {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  const auto caret = s.find('^');
  if (caret != std::string::npos) {
    const double base = parse_real(field, s.substr(0, caret));
    const double exponent = parse_real(field, s.substr(caret + 1));
    return std::pow(base, exponent);
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw ConfigError(field, "expected a number, got '" + text + "'");
  }
  return value;
}

long long parse_integer(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(field, "expected an integer, got '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& field, const std::string& text) {
  const long long v = parse_integer(field, text);
  if (v < -2147483647LL || v > 2147483647LL) throw ConfigError(field, "integer out of range");
  return static_cast<int>(v);
}

std::vector<int> parse_int_list(const std::string& field, const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split_list(text)) out.push_back(parse_int(field, item));
  if (out.empty()) throw ConfigError(field, "expected a comma separated list of integers");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto real = [&t](const std::string& key, double RunConfig::*member) {
      t[key] = [member](RunConfig& c, const std::string& k, const std::string& v) { c.*member = parse_real(k, v); };
    };
    auto integer = [&t](const std::string& key, int RunConfig::*member) {
      t[key] = [member](RunConfig& c, const std::string& k, const std::string& v) { c.*member = parse_int(k, v); };
    };
    auto threshold = [&t](const std::string& key, double Thresholds::*member) {
      t["threshold." + key] = [member](RunConfig& c, const std::string& k, const std::string& v) {
        c.thresholds.*member = parse_real(k, v);
      };
    };
    integer("modes", &RunConfig::modes);
    real("horizon", &RunConfig::horizon);
    real("dt", &RunConfig::dt);
    t["eps_multiples"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.eps_multiples = parse_int_list(k, v);
    };
    real("q_alpha", &RunConfig::q_alpha);
    real("sigma_scale", &RunConfig::sigma_scale);
    real("drift", &RunConfig::drift);
    real("drift_feedback", &RunConfig::drift_feedback);
    t["x0"] = [](RunConfig& c, const std::string&, const std::string& v) { c.x0 = trim(v); };
    real("hurst", &RunConfig::hurst);
    t["master_seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      const long long s = parse_integer(k, v);
      if (s < 0) throw ConfigError(k, "seed must be non-negative");
      c.master_seed = static_cast<std::uint64_t>(s);
    };
    integer("n_paths", &RunConfig::n_paths);
    t["experiments"] = [](RunConfig& c, const std::string&, const std::string& v) { c.experiments = split_list(v); };
    t["output_dir"] = [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = trim(v); };
    integer("dump_paths", &RunConfig::dump_paths);
    integer("estimate_stride", &RunConfig::estimate_stride);
    integer("e1.block_steps", &RunConfig::e1_block_steps);
    t["e3.modes"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.e3_modes = parse_int_list(k, v); };
    real("e3.dt", &RunConfig::e3_dt);
    integer("e3.paths", &RunConfig::e3_paths);
    real("e5.delta", &RunConfig::e5_delta);
    integer("e6.paths", &RunConfig::e6_paths);
    integer("e8.steps", &RunConfig::e8_steps);
    integer("e8.paths", &RunConfig::e8_paths);
    integer("e8.levels", &RunConfig::e8_levels);
    threshold("e1.final", &Thresholds::e1_final);
    threshold("e2.bound_factor", &Thresholds::e2_bound_factor);
    threshold("e2.min_slope", &Thresholds::e2_min_slope);
    threshold("e3.min_growth", &Thresholds::e3_min_growth);
    threshold("e4.ratio_low", &Thresholds::e4_ratio_low);
    threshold("e4.ratio_high", &Thresholds::e4_ratio_high);
    threshold("e4.control_factor", &Thresholds::e4_control_factor);
    threshold("e5.control_factor", &Thresholds::e5_control_factor);
    threshold("e6.rel_tol", &Thresholds::e6_rel_tol);
    threshold("e7.ratio_low", &Thresholds::e7_ratio_low);
    threshold("e7.ratio_high", &Thresholds::e7_ratio_high);
    threshold("e8.young_rel_tol", &Thresholds::e8_young_rel_tol);
    threshold("e8.holder_tol", &Thresholds::e8_holder_tol);
    return t;
  }();
  return table;
}

bool divides(double horizon, double dt) {
  const double ratio = horizon / dt;
  return dt > 0.0 && ratio >= 1.0 && std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio;
}

}  // namespace

int RunConfig::paths_for(const std::string& experiment) const {
  if (experiment == "E3") return e3_paths;
  if (experiment == "E6") return e6_paths;
  if (experiment == "E8") return e8_paths;
  return n_paths;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError(key, "unknown key");
  it->second(config, key, value);
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate(const RunConfig& c) {
  if (c.modes < 1) throw ConfigError("modes", "must be >= 1");
  if (!(c.horizon > 0.0)) throw ConfigError("horizon", "must be > 0");
  if (!divides(c.horizon, c.dt)) throw ConfigError("dt", "must divide the horizon");
  if (c.eps_multiples.size() < 3) throw ConfigError("eps_multiples", "need at least 3 rungs");
  for (std::size_t i = 0; i < c.eps_multiples.size(); ++i) {
    if (c.eps_multiples[i] < 4) throw ConfigError("eps_multiples", "multiples must be >= 4");
    if (i > 0 && c.eps_multiples[i] <= c.eps_multiples[i - 1]) {
      throw ConfigError("eps_multiples", "multiples must be strictly increasing");
    }
  }
  if (!(c.eps_multiples.back() * c.dt < c.horizon / 4.0)) throw ConfigError("eps_multiples", "largest eps must be < T/4");
  if (!(c.q_alpha > 0.0)) throw ConfigError("q_alpha", "must be > 0");
  static const std::set<std::string> profiles{"harmonic", "zero", "first"};
  if (!profiles.count(c.x0)) throw ConfigError("x0", "expected harmonic, zero or first");
  if (!(c.hurst > 0.5 && c.hurst < 1.0)) throw ConfigError("hurst", "must lie in (1/2, 1)");
  if (c.n_paths < 1) throw ConfigError("n_paths", "must be >= 1");
  if (c.experiments.empty()) throw ConfigError("experiments", "empty experiment list");
  static const std::set<std::string> known{"E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8"};
  for (const auto& e : c.experiments) {
    if (!known.count(e)) throw ConfigError("experiments", "unknown experiment " + e);
  }
  if (c.dump_paths < 0) throw ConfigError("dump_paths", "must be >= 0");
  if (c.estimate_stride < 1) throw ConfigError("estimate_stride", "must be >= 1");
  if (c.e1_block_steps < 1) throw ConfigError("e1.block_steps", "must be >= 1");
  if (c.e3_modes.size() < 2) throw ConfigError("e3.modes", "need at least two truncations");
  if (!divides(c.horizon, c.e3_dt)) throw ConfigError("e3.dt", "must divide the horizon");
  if (c.e3_paths < 1) throw ConfigError("e3.paths", "must be >= 1");
  if (!(c.e5_delta > 0.0)) throw ConfigError("e5.delta", "must be > 0");
  if (c.e6_paths < 1) throw ConfigError("e6.paths", "must be >= 1");
  if (c.e8_steps < 64 || c.e8_steps > (1 << 14) || (c.e8_steps & (c.e8_steps - 1)) != 0) {
    throw ConfigError("e8.steps", "must be a power of two in [64, 16384]");
  }
  if (c.e8_paths < 1) throw ConfigError("e8.paths", "must be >= 1");
  if (c.e8_levels < 2) throw ConfigError("e8.levels", "must be >= 2");
  if (!(c.thresholds.e1_final > 0.0)) throw ConfigError("threshold.e1.final", "must be > 0 (pilot-frozen)");
}

}  // namespace regcalc
