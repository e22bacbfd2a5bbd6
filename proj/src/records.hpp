#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "experiments.hpp"

namespace alfven {

nlohmann::json report_to_json(const FunctionalReport& r);
nlohmann::json record_to_json(const SweepRecord& r);
/// Scalar summary and nu-difference series (per-sample functionals are not restored).
SweepRecord record_from_json(const nlohmann::json& j);
nlohmann::json fit_to_json(const ScalingFit& f);
nlohmann::json sweep_to_json(const SweepResult& s);
SweepResult sweep_from_json(const nlohmann::json& j);

/// Per-run CSV files: FunctionalReport rows for the state and for the error
/// field, plus the (v, H) series. Returns the paths written.
std::vector<std::string> write_run_outputs(const std::string& dir, const std::string& prefix, const SweepRecord& r);
/// <dir>/sweep_<name>.json plus the per-run CSVs. Returns the JSON path.
std::string write_sweep_outputs(const std::string& dir, const SweepResult& s);

struct ReportSummary {
  int sweep_files = 0;
  int records = 0;
  std::vector<std::string> outputs;
};

/// Reads every sweep_*.json in `in_dir` and writes summary.csv, summary.json and
/// one <name>_scaling.dat (plot-ready columns) per sweep into `out_dir`.
/// Throws ConfigError when no sweep file is found.
ReportSummary aggregate_reports(const std::string& in_dir, const std::string& out_dir);

}  // namespace alfven
