#pragma once

#include <functional>
#include <string>
#include <vector>

#include "config.hpp"

namespace alfven {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  int threads = 1;
  /// When non-empty, sweep JSON and per-run CSVs of the scaling criteria are written here.
  std::string out_dir;
  /// Criterion ids to run; empty runs all ten.
  std::vector<int> only;
  /// Called with one formatted line per finished criterion.
  std::function<void(const std::string&)> on_line;
};

inline constexpr int kCriterionCount = 10;

/// "PASS  4 interaction_scaling  exponent=2.0018 r2=1.0000  (41.2 s)"
std::string format_criterion(const CriterionResult& r);

/// Runs the acceptance criteria on the given base configuration.
std::vector<CriterionResult> run_acceptance(const RunConfig& cfg, const AcceptanceOptions& opts = {});

}  // namespace alfven
