#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "grid.hpp"
#include "state.hpp"

namespace alfven {

inline constexpr int kFormatVersion = 1;

/// Per-sweep overrides of the base run parameters.
struct SweepOverrides {
  std::optional<std::vector<double>> epsilon_list;
  std::optional<std::vector<double>> nu_list;
  std::optional<double> t_end_star;
  std::optional<DataMode> mode;
  std::optional<double> gamma;
};

struct RunConfig {
  GridSpec grid;
  InitialDataConfig init;
  double s = 0.6;
  int k = 4;
  std::vector<double> epsilon_list{0.4, 0.2, 0.1, 0.05};
  std::vector<double> nu_list{0.0};
  double t_end_star = 10.0;
  double dt = 0.01;
  /// Number of sampling intervals on [0, t_end_star]; sample_count + 1 uniform samples.
  int sample_count = 50;
  Scheme scheme = Scheme::rk4;
  /// Radius of B_R(0) for the ball supremum and the time at which it is recorded.
  double ball_radius = 4.0;
  double ball_time = 9.0;
  /// Original time t at which (v, H) are additionally sampled (t* = t / eps).
  double original_time = 1.0;
  std::string output_dir = "out";
  int format_version = kFormatVersion;

  SweepOverrides interaction;
  SweepOverrides ball;
  SweepOverrides nu;
  SweepOverrides uniformity;
  SweepOverrides large_data;
  /// eps for the single run checked for weighted decay.
  double decay_epsilon = 0.2;
  /// Fixed fast time at which the nu-difference is fitted.
  double nu_time = 5.0;

  /// Throws ConfigError on any violated invariant (eps*nu <= 1/2, window, ...).
  void validate() const;
  /// Copy with the overrides of one sweep applied.
  RunConfig with(const SweepOverrides& o) const;
  /// Uniform samples plus the ball time and the original-time samples, sorted and unique.
  std::vector<double> sample_times(double epsilon) const;
};

/// Parses JSON text; unknown keys are errors.
RunConfig parse_config(const std::string& json_text);
RunConfig default_config();
/// "default" (or empty) selects the built-in configuration; anything else is a path.
RunConfig load_config(const std::string& name_or_path);
std::string config_to_json(const RunConfig& cfg);
/// FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace alfven
