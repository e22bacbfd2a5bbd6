#include "records.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace alfven {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string tag(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string run_prefix(const std::string& sweep, const SweepRecord& r) {
  return sweep + "_eps" + tag(r.epsilon) + "_nu" + tag(r.nu);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.precision(17);
  return out;
}

void write_header(std::ofstream& out, const SweepRecord& r) {
  out << "# format_version=" << r.format_version << "\n";
  out << "# config_hash=" << r.config_hash << "\n";
  out << "# epsilon=" << r.epsilon << " nu=" << r.nu << " E0=" << r.E0 << "\n";
}

void write_reports(const std::string& path, const SweepRecord& r, const std::vector<FunctionalReport>& rows) {
  auto out = open_out(path);
  write_header(out, r);
  const int order = rows.empty() ? 0 : rows.front().order;
  out << report_csv_header(order) << "\n";
  for (const auto& row : rows) out << report_csv_row(row) << "\n";
}

}  // namespace

json report_to_json(const FunctionalReport& r) {
  const auto cols = report_columns(r.order);
  std::vector<double> vals{r.t_star, r.E, r.W, r.D, r.e_inverse, r.e_zeroth};
  vals.insert(vals.end(), r.e_blocks.begin(), r.e_blocks.end());
  vals.insert(vals.end(), {r.decay_plus, r.decay_minus, r.ball_sup});
  vals.insert(vals.end(), r.sobolev.begin(), r.sobolev.end());
  vals.push_back(r.inverse_monitor);
  json j = json::object();
  for (std::size_t i = 0; i < vals.size(); ++i) j[cols[i]] = vals[i];
  j["valid"] = r.valid ? 1 : 0;
  return j;
}

json record_to_json(const SweepRecord& r) {
  json j;
  j["format_version"] = r.format_version;
  j["config_hash"] = r.config_hash;
  j["epsilon"] = r.epsilon;
  j["nu"] = r.nu;
  j["amplitude"] = r.amplitude;
  j["E0"] = r.E0;
  j["support_leakage"] = r.support_leakage;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.data_hash));
  j["data_hash"] = hash;
  j["interaction_measure"] = r.interaction_measure;
  j["integral_W"] = r.integral_W;
  j["uniformity_ratio"] = r.uniformity_ratio;
  j["ball_time"] = r.ball_time;
  j["ball_sup"] = r.ball_sup;
  j["linear_ball_sup"] = r.linear_ball_sup;
  j["decay_max_plus"] = r.decay_max_plus;
  j["decay_min_plus"] = r.decay_min_plus;
  j["decay_max_minus"] = r.decay_max_minus;
  j["decay_min_minus"] = r.decay_min_minus;
  j["valid_samples"] = r.valid_samples;
  j["diverged"] = r.diverged;
  j["blowup_t_star"] = r.blowup_t_star;
  j["message"] = r.message;
  j["wall_seconds"] = r.wall_seconds;
  json nd = json::array();
  for (const auto& d : r.nu_difference) nd.push_back({{"t_star", d.t_star}, {"value", d.value}});
  j["nu_difference"] = nd;
  json orig = json::array();
  for (const auto& o : r.original)
    orig.push_back({{"t", o.t},
                    {"t_star", o.t_star},
                    {"sup_v", o.sup_v},
                    {"sup_h", o.sup_h},
                    {"ball_sup_v", o.ball_sup_v},
                    {"ball_sup_h", o.ball_sup_h},
                    {"weighted_decay", o.weighted_decay}});
  j["original"] = orig;
  json samples = json::array();
  for (const auto& s : r.samples) samples.push_back(report_to_json(s));
  j["samples"] = samples;
  json errs = json::array();
  for (const auto& s : r.error_samples) errs.push_back(report_to_json(s));
  j["error_samples"] = errs;
  return j;
}

SweepRecord record_from_json(const json& j) {
  try {
    SweepRecord r;
    r.format_version = j.at("format_version").get<int>();
    if (r.format_version != kFormatVersion) throw ConfigError("unsupported record format_version");
    r.config_hash = j.at("config_hash").get<std::string>();
    r.epsilon = j.at("epsilon").get<double>();
    r.nu = j.at("nu").get<double>();
    r.amplitude = j.at("amplitude").get<double>();
    r.E0 = j.at("E0").get<double>();
    r.support_leakage = j.at("support_leakage").get<double>();
    r.data_hash = std::stoull(j.at("data_hash").get<std::string>(), nullptr, 16);
    r.interaction_measure = j.at("interaction_measure").get<double>();
    r.integral_W = j.at("integral_W").get<double>();
    r.uniformity_ratio = j.at("uniformity_ratio").get<double>();
    r.ball_time = j.at("ball_time").get<double>();
    r.ball_sup = j.at("ball_sup").get<double>();
    r.linear_ball_sup = j.at("linear_ball_sup").get<double>();
    r.decay_max_plus = j.at("decay_max_plus").get<double>();
    r.decay_min_plus = j.at("decay_min_plus").get<double>();
    r.decay_max_minus = j.at("decay_max_minus").get<double>();
    r.decay_min_minus = j.at("decay_min_minus").get<double>();
    r.valid_samples = j.at("valid_samples").get<int>();
    r.diverged = j.at("diverged").get<bool>();
    r.blowup_t_star = j.at("blowup_t_star").get<double>();
    r.message = j.at("message").get<std::string>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    for (const auto& d : j.at("nu_difference"))
      r.nu_difference.push_back({d.at("t_star").get<double>(), d.at("value").get<double>()});
    for (const auto& o : j.at("original"))
      r.original.push_back({o.at("t").get<double>(), o.at("t_star").get<double>(), o.at("sup_v").get<double>(),
                            o.at("sup_h").get<double>(), o.at("ball_sup_v").get<double>(),
                            o.at("ball_sup_h").get<double>(), o.at("weighted_decay").get<double>()});
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed sweep record: ") + e.what());
  }
}

json fit_to_json(const ScalingFit& f) {
  return {{"exponent", f.exponent}, {"log_intercept", f.log_intercept}, {"r_squared", f.r_squared},
          {"points", f.points}};
}

json sweep_to_json(const SweepResult& s) {
  json j;
  j["format_version"] = kFormatVersion;
  j["config_hash"] = s.config_hash;
  j["sweep"] = s.name;
  j["fit"] = s.fit ? fit_to_json(*s.fit) : json(nullptr);
  j["diagnostic"] = s.diagnostic;
  j["metrics"] = s.metrics;
  json recs = json::array();
  for (const auto& r : s.records) recs.push_back(record_to_json(r));
  j["records"] = recs;
  json extra = json::array();
  for (const auto& r : s.extra_records) extra.push_back(record_to_json(r));
  j["extra_records"] = extra;
  return j;
}

SweepResult sweep_from_json(const json& j) {
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) throw ConfigError("unsupported sweep format_version");
    SweepResult s;
    s.name = j.at("sweep").get<std::string>();
    s.config_hash = j.at("config_hash").get<std::string>();
    s.diagnostic = j.at("diagnostic").get<std::string>();
    if (!j.at("fit").is_null()) {
      const auto& f = j["fit"];
      s.fit = ScalingFit{f.at("exponent").get<double>(), f.at("log_intercept").get<double>(),
                         f.at("r_squared").get<double>(), f.at("points").get<int>()};
    }
    s.metrics = j.at("metrics").get<std::map<std::string, double>>();
    for (const auto& r : j.at("records")) s.records.push_back(record_from_json(r));
    for (const auto& r : j.at("extra_records")) s.extra_records.push_back(record_from_json(r));
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed sweep file: ") + e.what());
  }
}

std::vector<std::string> write_run_outputs(const std::string& dir, const std::string& prefix, const SweepRecord& r) {
  ensure_dir(dir);
  std::vector<std::string> paths;
  const auto base = (fs::path(dir) / prefix).string();
  write_reports(base + ".csv", r, r.samples);
  paths.push_back(base + ".csv");
  write_reports(base + "_error.csv", r, r.error_samples);
  paths.push_back(base + "_error.csv");

  auto out = open_out(base + "_original.csv");
  write_header(out, r);
  out << "t,t_star,sup_v,sup_h,ball_sup_v,ball_sup_h,weighted_decay\n";
  for (const auto& o : r.original)
    out << o.t << ',' << o.t_star << ',' << o.sup_v << ',' << o.sup_h << ',' << o.ball_sup_v << ','
        << o.ball_sup_h << ',' << o.weighted_decay << "\n";
  paths.push_back(base + "_original.csv");

  if (!r.nu_difference.empty()) {
    auto nd = open_out(base + "_nu_difference.csv");
    write_header(nd, r);
    nd << "t_star,value,value_over_t_star\n";
    for (const auto& d : r.nu_difference)
      nd << d.t_star << ',' << d.value << ',' << (d.t_star > 0.0 ? d.value / d.t_star : 0.0) << "\n";
    paths.push_back(base + "_nu_difference.csv");
  }
  return paths;
}

std::string write_sweep_outputs(const std::string& dir, const SweepResult& s) {
  ensure_dir(dir);
  for (const auto& r : s.records) write_run_outputs(dir, run_prefix(s.name, r), r);
  for (const auto& r : s.extra_records) write_run_outputs(dir, run_prefix(s.name + "_large", r), r);
  const auto path = (fs::path(dir) / ("sweep_" + s.name + ".json")).string();
  auto out = open_out(path);
  out << sweep_to_json(s).dump(2) << "\n";
  return path;
}

ReportSummary aggregate_reports(const std::string& in_dir, const std::string& out_dir) {
  std::error_code ec;
  if (!fs::is_directory(in_dir, ec)) throw ConfigError("report input is not a directory: " + in_dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(in_dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind("sweep_", 0) == 0 && e.path().extension() == ".json")
      files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("no sweep_*.json records found in " + in_dir);

  ensure_dir(out_dir);
  ReportSummary summary;
  json all = json::array();
  auto csv = open_out((fs::path(out_dir) / "summary.csv").string());
  csv << "sweep,config_hash,epsilon,nu,amplitude,E0,interaction_measure,ball_sup,linear_ball_sup,"
         "uniformity_ratio,decay_max_plus,decay_min_plus,decay_max_minus,decay_min_minus,diverged\n";
  for (const auto& f : files) {
    std::ifstream in(f);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("cannot parse " + f.string() + ": " + e.what());
    }
    const auto s = sweep_from_json(j);
    ++summary.sweep_files;
    json entry = {{"sweep", s.name}, {"config_hash", s.config_hash}, {"diagnostic", s.diagnostic},
                  {"metrics", s.metrics}};
    entry["fit"] = s.fit ? fit_to_json(*s.fit) : json(nullptr);
    all.push_back(entry);

    auto dat = open_out((fs::path(out_dir) / (s.name + "_scaling.dat")).string());
    dat << "# format_version=" << kFormatVersion << " config_hash=" << s.config_hash << "\n";
    dat << "# epsilon nu interaction_measure ball_sup uniformity_ratio nu_difference_last\n";
    for (const auto* group : {&s.records, &s.extra_records}) {
      for (const auto& r : *group) {
        ++summary.records;
        csv << s.name << ',' << s.config_hash << ',' << r.epsilon << ',' << r.nu << ',' << r.amplitude << ','
            << r.E0 << ',' << r.interaction_measure << ',' << r.ball_sup << ',' << r.linear_ball_sup << ','
            << r.uniformity_ratio << ',' << r.decay_max_plus << ',' << r.decay_min_plus << ','
            << r.decay_max_minus << ',' << r.decay_min_minus << ',' << (r.diverged ? 1 : 0) << "\n";
        dat << r.epsilon << ' ' << r.nu << ' ' << r.interaction_measure << ' ' << r.ball_sup << ' '
            << r.uniformity_ratio << ' ' << (r.nu_difference.empty() ? 0.0 : r.nu_difference.back().value)
            << "\n";
      }
    }
    summary.outputs.push_back((fs::path(out_dir) / (s.name + "_scaling.dat")).string());
  }
  auto js = open_out((fs::path(out_dir) / "summary.json").string());
  js << json{{"format_version", kFormatVersion}, {"sweeps", all}}.dump(2) << "\n";
  summary.outputs.push_back((fs::path(out_dir) / "summary.csv").string());
  summary.outputs.push_back((fs::path(out_dir) / "summary.json").string());
  return summary;
}

}  // namespace alfven
