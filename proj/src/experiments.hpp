#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "functionals.hpp"
#include "power_law.hpp"

namespace alfven {

/// (v, H) diagnostics at one sample, in original time t = eps t*.
struct OriginalSample {
  double t = 0.0;
  double t_star = 0.0;
  double sup_v = 0.0;
  double sup_h = 0.0;
  double ball_sup_v = 0.0;
  double ball_sup_h = 0.0;
  /// sup_x max(|v|, |H|) / (<x + e1 t/eps>^{-s} + <x - e1 t/eps>^{-s})
  double weighted_decay = 0.0;
};

struct NuDifferenceSample {
  double t_star = 0.0;
  /// ||(L+_nu - L+_0, L-_nu - L-_0)||_{k-1}^2
  double value = 0.0;
};

struct SweepRecord {
  double epsilon = 0.0;
  double nu = 0.0;
  double amplitude = 0.0;
  double E0 = 0.0;
  double support_leakage = 0.0;
  std::uint64_t data_hash = 0;

  std::vector<FunctionalReport> samples;        // state functionals, order k
  std::vector<FunctionalReport> error_samples;  // Lambda - Lambda_L, order k-1
  std::vector<OriginalSample> original;
  std::vector<NuDifferenceSample> nu_difference;

  /// max_t [E^NL_{k-1}(t) + int_0^t (W^NL_{k-1} + eps nu D^NL_{k-1})]
  double interaction_measure = 0.0;
  /// int_0^T W_k
  double integral_W = 0.0;
  /// max_t [E_k(t) + int_0^t (W_k + eps nu D_k)] / E0
  double uniformity_ratio = 0.0;
  double ball_time = 0.0;
  double ball_sup = -1.0;         // -1 when the ball time was not sampled
  double linear_ball_sup = -1.0;  // same for the linear solution
  double decay_max_plus = 0.0, decay_min_plus = 0.0;
  double decay_max_minus = 0.0, decay_min_minus = 0.0;
  int valid_samples = 0;

  bool diverged = false;
  double blowup_t_star = 0.0;
  std::string message;
  double wall_seconds = 0.0;
  std::string config_hash;
  int format_version = kFormatVersion;
};

struct SweepResult {
  std::string name;
  std::vector<SweepRecord> records;
  /// Extra runs (large-data mode for the uniformity sweep).
  std::vector<SweepRecord> extra_records;
  std::optional<ScalingFit> fit;
  /// Empty when the fit succeeded; otherwise why it was aborted.
  std::string diagnostic;
  std::map<std::string, double> metrics;
  std::string config_hash;
};

/// Optional coupling between runs of one sweep.
struct RunLinks {
  /// Sampled states of the nu = 0 run from the same data; enables the nu-difference series.
  const std::vector<ElsasserState>* reference = nullptr;
  /// Receives the state at every sample time.
  std::vector<ElsasserState>* keep = nullptr;
  /// Shared grid; built from the config when null.
  GridPtr grid;
};

/// Generates data, evolves the nonlinear system, compares with the exact
/// linear solution at every sample and reduces everything to a record.
/// Blow-up is recorded (diverged = true), not thrown.
SweepRecord run_single(const RunConfig& cfg, double epsilon, double nu, const RunLinks& links = {});

/// Runs every (eps, nu) pair of the config; records ordered by (eps, nu).
std::vector<SweepRecord> run_all(const RunConfig& cfg, int threads = 1);

SweepResult sweep_interaction_vanishing(const RunConfig& cfg, int threads = 1);
/// Throws ConfigError unless nu = 0 and 2R < ball_time <= t_end_star inside the window.
void validate_ball_sweep(const RunConfig& cfg);
SweepResult sweep_ball_decay(const RunConfig& cfg, int threads = 1);
SweepResult sweep_nu_limit(const RunConfig& cfg, int threads = 1);
SweepResult sweep_uniformity(const RunConfig& cfg, int threads = 1);
/// Dispatch by name: interaction | ball | nu | uniformity.
SweepResult run_named_sweep(const std::string& name, const RunConfig& cfg, int threads = 1);

/// Fits used by the sweeps, exposed so that fits can be recomputed from stored records.
SweepResult fit_interaction(std::vector<SweepRecord> records);
SweepResult fit_ball(std::vector<SweepRecord> records);
SweepResult fit_nu(std::vector<SweepRecord> records, double nu_time);

/// (v, H) diagnostics of one state.
OriginalSample original_sample(const ElsasserState& state, double ball_radius, double s);
/// Per-sample (v, H) diagnostics of a record; throws UsageError when eps does not match.
std::vector<OriginalSample> report_original_variables(const SweepRecord& record, double epsilon);

/// Runs tasks on up to `threads` workers; results are in task order.
std::vector<SweepRecord> run_tasks(const std::vector<std::function<SweepRecord()>>& tasks, int threads);

/// Trapezoid cumulative integral of ys over ts (same length, first entry 0).
std::vector<double> cumulative_trapezoid(const std::vector<double>& ts, const std::vector<double>& ys);

}  // namespace alfven
