#pragma once

// Flat key = value run configuration. Lines starting with '#' are comments.
// Numbers accept the form 2^-12 besides ordinary decimals. See
// docs/config_schema.md for every key.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace regcalc {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct Thresholds {
  double e1_final = 0.075;          // pilot-frozen bound on the finest-rung median
  double e2_bound_factor = 1.05;
  double e2_min_slope = 0.8;
  double e3_min_growth = 1.25;
  double e4_ratio_low = 1.5;
  double e4_ratio_high = 3.0;
  double e4_control_factor = 5.0;
  double e5_control_factor = 5.0;
  double e6_rel_tol = 0.10;
  double e7_ratio_low = 1.7;
  double e7_ratio_high = 2.5;
  double e8_young_rel_tol = 1e-3;
  double e8_holder_tol = 0.05;
};

struct RunConfig {
  int modes = 8;
  double horizon = 1.0;
  double dt = 1.0 / 4096.0;
  std::vector<int> eps_multiples{4, 16, 64};
  double q_alpha = 2.0;
  double sigma_scale = 1.0;
  double drift = 0.0;           // b_k = drift / k
  double drift_feedback = 0.0;  // diagonal state feedback
  std::string x0 = "harmonic";  // harmonic (1/k) | zero | first
  double hurst = 0.75;
  std::uint64_t master_seed = 20240917;
  int n_paths = 100;
  std::vector<std::string> experiments{"E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8"};
  std::string output_dir = "out";
  int dump_paths = 2;
  int estimate_stride = 64;

  // per-experiment knobs
  int e1_block_steps = 64;
  std::vector<int> e3_modes{8, 16, 32};
  double e3_dt = 1.0 / 16384.0;
  int e3_paths = 20;
  double e5_delta = 1e-3;
  int e6_paths = 200;
  int e8_steps = 4096;
  int e8_paths = 50;
  int e8_levels = 4;

  Thresholds thresholds;

  /// Paths for an experiment: its own knob when it has one, else n_paths.
  int paths_for(const std::string& experiment) const;
};

/// Parses configuration text on top of the defaults. Unknown keys and
/// malformed values raise ConfigError naming the field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Applies one key = value override (same validation as parse_config).
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Checks the cross-field invariants (dt divides T, ladder multiples >= 4 and
/// strictly increasing, n_paths >= 1, non-empty experiment list, ...).
void validate(const RunConfig& config);

std::vector<std::string> split_list(const std::string& text);

}  // namespace regcalc
