#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "checkpoint.hpp"
#include "errors.hpp"
#include "weights.hpp"

namespace alfven {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a table");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

DataMode parse_mode(const std::string& s) {
  if (s == "standard") return DataMode::standard;
  if (s == "large_data") return DataMode::large_data;
  throw ConfigError("mode must be 'standard' or 'large_data', got '" + s + "'");
}

const char* mode_name(DataMode m) { return m == DataMode::standard ? "standard" : "large_data"; }

Scheme parse_scheme(const std::string& s) {
  if (s == "rk4") return Scheme::rk4;
  if (s == "strang_rk4") return Scheme::strang_rk4;
  throw ConfigError("scheme must be 'rk4' or 'strang_rk4', got '" + s + "'");
}

const char* scheme_name(Scheme s) { return s == Scheme::rk4 ? "rk4" : "strang_rk4"; }

std::array<double, 3> parse_center(const json& j, const std::string& where) {
  std::array<double, 3> c{0.0, 0.0, 0.0};
  if (!j.is_array() || j.size() > 3) throw ConfigError(where + " must be an array of at most 3 numbers");
  for (std::size_t i = 0; i < j.size(); ++i) c[i] = j[i].get<double>();
  return c;
}

SweepOverrides parse_overrides(const json& j, const std::string& where) {
  check_keys(j, {"epsilon_list", "nu_list", "t_end_star", "mode", "gamma"}, where);
  SweepOverrides o;
  if (j.contains("epsilon_list")) o.epsilon_list = get<std::vector<double>>(j, "epsilon_list", where);
  if (j.contains("nu_list")) o.nu_list = get<std::vector<double>>(j, "nu_list", where);
  if (j.contains("t_end_star")) o.t_end_star = get<double>(j, "t_end_star", where);
  if (j.contains("mode")) o.mode = parse_mode(get<std::string>(j, "mode", where));
  if (j.contains("gamma")) o.gamma = get<double>(j, "gamma", where);
  return o;
}

json overrides_to_json(const SweepOverrides& o) {
  json j = json::object();
  if (o.epsilon_list) j["epsilon_list"] = *o.epsilon_list;
  if (o.nu_list) j["nu_list"] = *o.nu_list;
  if (o.t_end_star) j["t_end_star"] = *o.t_end_star;
  if (o.mode) j["mode"] = mode_name(*o.mode);
  if (o.gamma) j["gamma"] = *o.gamma;
  return j;
}

void validate_base(const RunConfig& c) {
  if (c.format_version != kFormatVersion)
    throw ConfigError("unsupported format_version " + std::to_string(c.format_version));
  c.grid.validate();
  c.init.validate(c.grid);
  if (c.k < 4) throw ConfigError("k must satisfy k >= 4");
  WeightSpec::make(c.s, c.k);
  if (!(c.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(c.t_end_star > 0.0)) throw ConfigError("t_end_star must be positive");
  if (c.sample_count < 1) throw ConfigError("sample_count must be >= 1");
  if (!(c.ball_radius > 0.0) || !(c.ball_time >= 0.0)) throw ConfigError("ball_radius/ball_time out of range");
  if (!(c.original_time >= 0.0)) throw ConfigError("original_time must be non-negative");
  if (c.epsilon_list.empty()) throw ConfigError("epsilon_list is empty");
  if (c.nu_list.empty()) throw ConfigError("nu_list is empty");

  double reach = c.init.support_radius + c.init.center_jitter * std::sqrt(c.grid.ndim());
  double cmax = 0.0;
  for (const auto& ctr : {c.init.center_plus, c.init.center_minus}) {
    double r2 = 0.0;
    for (int a = 0; a < c.grid.ndim(); ++a) r2 += ctr[a] * ctr[a];
    cmax = std::max(cmax, std::sqrt(r2));
  }
  reach += cmax;
  if (!(c.t_end_star + reach < c.grid.half_length))
    throw ConfigError("no-wrap window violated: t_end_star + support reach must stay below L");

  const double dx = c.grid.dx();
  for (double eps : c.epsilon_list) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("epsilon values must be finite and >= 0");
    if (c.init.mode == DataMode::large_data && !(eps > 0.0)) throw ConfigError("large-data mode needs eps > 0");
    for (double nu : c.nu_list) {
      if (!(nu >= 0.0) || !std::isfinite(nu)) throw ConfigError("nu values must be finite and >= 0");
      if (eps * nu > 0.5) {
        std::ostringstream os;
        os << "hypothesis eps*nu <= 1/2 violated for eps=" << eps << ", nu=" << nu << " (eps*nu=" << eps * nu << ")";
        throw ConfigError(os.str());
      }
      if (eps * nu > 0.0 && c.dt > 0.25 * dx * dx / (eps * nu))
        throw ConfigError("dt violates the diffusive CFL bound 0.25 dx^2/(eps nu)");
    }
  }
}

}  // namespace

RunConfig RunConfig::with(const SweepOverrides& o) const {
  RunConfig c = *this;
  if (o.epsilon_list) c.epsilon_list = *o.epsilon_list;
  if (o.nu_list) c.nu_list = *o.nu_list;
  if (o.t_end_star) c.t_end_star = *o.t_end_star;
  if (o.mode) c.init.mode = *o.mode;
  if (o.gamma) c.init.gamma = *o.gamma;
  return c;
}

void RunConfig::validate() const {
  validate_base(*this);
  for (const auto* o : {&interaction, &ball, &nu, &uniformity, &large_data}) validate_base(with(*o));
  if (!(decay_epsilon >= 0.0)) throw ConfigError("decay_epsilon must be >= 0");
  if (!(nu_time > 0.0)) throw ConfigError("nu_time must be positive");
}

std::vector<double> RunConfig::sample_times(double epsilon) const {
  std::vector<double> t;
  for (int i = 0; i <= sample_count; ++i) t.push_back(t_end_star * i / sample_count);
  if (ball_time <= t_end_star) t.push_back(ball_time);
  if (epsilon > 0.0 && original_time > 0.0 && original_time / epsilon <= t_end_star)
    t.push_back(original_time / epsilon);
  std::sort(t.begin(), t.end());
  std::vector<double> out;
  for (double v : t)
    if (out.empty() || v - out.back() > 1e-12 * std::max(1.0, v)) out.push_back(v);
  return out;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j,
             {"format_version", "grid", "init", "weight", "epsilon_list", "nu_list", "t_end_star", "dt",
              "sample_count", "scheme", "mode", "ball_radius", "ball_time", "original_time", "output_dir",
              "decay_epsilon", "nu_time", "sweeps"},
             "config");
  RunConfig c;
  const std::string top = "config";
  if (j.contains("format_version")) c.format_version = get<int>(j, "format_version", top);
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    check_keys(g, {"dims", "half_length", "dealias_fraction"}, "grid");
    if (g.contains("dims")) c.grid.dims = get<std::vector<int>>(g, "dims", "grid");
    if (g.contains("half_length")) c.grid.half_length = get<double>(g, "half_length", "grid");
    if (g.contains("dealias_fraction")) c.grid.dealias_fraction = get<double>(g, "dealias_fraction", "grid");
  }
  if (j.contains("init")) {
    const auto& i = j["init"];
    check_keys(i,
               {"amplitude", "support_radius", "sharpness", "center_plus", "center_minus", "center_jitter",
                "gamma", "seed"},
               "init");
    if (i.contains("amplitude")) c.init.amplitude = get<double>(i, "amplitude", "init");
    if (i.contains("support_radius")) c.init.support_radius = get<double>(i, "support_radius", "init");
    if (i.contains("sharpness")) c.init.sharpness = get<double>(i, "sharpness", "init");
    if (i.contains("center_plus")) c.init.center_plus = parse_center(i["center_plus"], "init.center_plus");
    if (i.contains("center_minus")) c.init.center_minus = parse_center(i["center_minus"], "init.center_minus");
    if (i.contains("center_jitter")) c.init.center_jitter = get<double>(i, "center_jitter", "init");
    if (i.contains("gamma")) c.init.gamma = get<double>(i, "gamma", "init");
    if (i.contains("seed")) c.init.seed = get<std::uint64_t>(i, "seed", "init");
  }
  if (j.contains("weight")) {
    const auto& w = j["weight"];
    check_keys(w, {"s", "k"}, "weight");
    if (w.contains("s")) c.s = get<double>(w, "s", "weight");
    if (w.contains("k")) c.k = get<int>(w, "k", "weight");
  }
  if (j.contains("epsilon_list")) c.epsilon_list = get<std::vector<double>>(j, "epsilon_list", top);
  if (j.contains("nu_list")) c.nu_list = get<std::vector<double>>(j, "nu_list", top);
  if (j.contains("t_end_star")) c.t_end_star = get<double>(j, "t_end_star", top);
  if (j.contains("dt")) c.dt = get<double>(j, "dt", top);
  if (j.contains("sample_count")) c.sample_count = get<int>(j, "sample_count", top);
  if (j.contains("scheme")) c.scheme = parse_scheme(get<std::string>(j, "scheme", top));
  if (j.contains("mode")) c.init.mode = parse_mode(get<std::string>(j, "mode", top));
  if (j.contains("ball_radius")) c.ball_radius = get<double>(j, "ball_radius", top);
  if (j.contains("ball_time")) c.ball_time = get<double>(j, "ball_time", top);
  if (j.contains("original_time")) c.original_time = get<double>(j, "original_time", top);
  if (j.contains("output_dir")) c.output_dir = get<std::string>(j, "output_dir", top);
  if (j.contains("decay_epsilon")) c.decay_epsilon = get<double>(j, "decay_epsilon", top);
  if (j.contains("nu_time")) c.nu_time = get<double>(j, "nu_time", top);
  if (j.contains("sweeps")) {
    const auto& s = j["sweeps"];
    check_keys(s, {"interaction", "ball", "nu", "uniformity", "large_data"}, "sweeps");
    if (s.contains("interaction")) c.interaction = parse_overrides(s["interaction"], "sweeps.interaction");
    if (s.contains("ball")) c.ball = parse_overrides(s["ball"], "sweeps.ball");
    if (s.contains("nu")) c.nu = parse_overrides(s["nu"], "sweeps.nu");
    if (s.contains("uniformity")) c.uniformity = parse_overrides(s["uniformity"], "sweeps.uniformity");
    if (s.contains("large_data")) c.large_data = parse_overrides(s["large_data"], "sweeps.large_data");
  }
  c.validate();
  return c;
}

RunConfig default_config() {
  RunConfig c;
  c.uniformity.epsilon_list = std::vector<double>{1.0, 0.5, 0.25, 0.1};
  c.uniformity.nu_list = std::vector<double>{0.1};
  c.nu.epsilon_list = std::vector<double>{0.2};
  c.nu.nu_list = std::vector<double>{0.4, 0.2, 0.1, 0.05};
  c.nu.t_end_star = 5.0;
  c.large_data.epsilon_list = std::vector<double>{0.2, 0.1, 0.05};
  c.large_data.mode = DataMode::large_data;
  c.large_data.gamma = 1.0;
  return c;
}

RunConfig load_config(const std::string& name) {
  if (name.empty() || name == "default") {
    auto c = default_config();
    c.validate();
    return c;
  }
  std::ifstream in(name);
  if (!in) throw ConfigError("cannot open config file: " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["format_version"] = c.format_version;
  j["grid"] = {{"dims", c.grid.dims}, {"half_length", c.grid.half_length},
               {"dealias_fraction", c.grid.dealias_fraction}};
  const int n = c.grid.ndim();
  auto center = [n](const std::array<double, 3>& a) { return std::vector<double>(a.begin(), a.begin() + n); };
  j["init"] = {{"amplitude", c.init.amplitude},
               {"support_radius", c.init.support_radius},
               {"sharpness", c.init.sharpness},
               {"center_plus", center(c.init.center_plus)},
               {"center_minus", center(c.init.center_minus)},
               {"center_jitter", c.init.center_jitter},
               {"gamma", c.init.gamma},
               {"seed", c.init.seed}};
  j["weight"] = {{"s", c.s}, {"k", c.k}};
  j["epsilon_list"] = c.epsilon_list;
  j["nu_list"] = c.nu_list;
  j["t_end_star"] = c.t_end_star;
  j["dt"] = c.dt;
  j["sample_count"] = c.sample_count;
  j["scheme"] = scheme_name(c.scheme);
  j["mode"] = mode_name(c.init.mode);
  j["ball_radius"] = c.ball_radius;
  j["ball_time"] = c.ball_time;
  j["original_time"] = c.original_time;
  j["output_dir"] = c.output_dir;
  j["decay_epsilon"] = c.decay_epsilon;
  j["nu_time"] = c.nu_time;
  j["sweeps"] = {{"interaction", overrides_to_json(c.interaction)},
                 {"ball", overrides_to_json(c.ball)},
                 {"nu", overrides_to_json(c.nu)},
                 {"uniformity", overrides_to_json(c.uniformity)},
                 {"large_data", overrides_to_json(c.large_data)}};
  return j.dump(2);
}

std::string config_hash(const RunConfig& c) {
  // the output location does not change any measured value
  auto j = json::parse(config_to_json(c));
  j.erase("output_dir");
  const auto text = j.dump();
  const auto h = fnv1a(text.data(), text.size());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace alfven
