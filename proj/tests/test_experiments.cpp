#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"
#include "experiments.hpp"
#include "helpers.hpp"
#include "records.hpp"

using namespace testing;
namespace fs = std::filesystem;

namespace {

// 64^2 on [-8, 8): dx = 0.25 like the default, a quarter of the cost per step.
RunConfig tiny_config() {
  RunConfig c = default_config();
  c.grid.dims = {64, 64};
  c.grid.half_length = 8.0;
  c.init.support_radius = 2.0;
  c.t_end_star = 5.0;
  c.dt = 0.01;
  c.sample_count = 10;
  c.ball_radius = 2.0;
  c.ball_time = 4.5;
  c.nu_time = 2.5;
  c.nu.t_end_star = 2.5;
  c.epsilon_list = {0.4, 0.2, 0.1};
  return c;
}

SweepRecord synthetic(double eps, double nu) {
  SweepRecord r;
  r.epsilon = eps;
  r.nu = nu;
  r.amplitude = 1.0;
  r.E0 = 1.0;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("power-law fit") {
  const std::vector<double> xs{0.4, 0.2, 0.1, 0.05};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.0 * x);
  auto f = fit_power_law(xs, ys);
  CHECK(std::abs(f.exponent - 1.0) < 1e-12);
  CHECK(std::abs(f.r_squared - 1.0) < 1e-12);
  CHECK(f.points == 4);
  CHECK(std::exp(f.log_intercept) == doctest::Approx(3.0));

  ys.clear();
  for (double x : xs) ys.push_back(x * x);
  CHECK(std::abs(fit_power_law(xs, ys).exponent - 2.0) < 1e-12);

  CHECK_THROWS_AS(fit_power_law({1.0, 2.0}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(fit_power_law({1.0, 2.0, 3.0}, {1.0, 0.0, 3.0}), DomainError);
  CHECK_THROWS_AS(fit_power_law({1.0, -2.0, 3.0}, {1.0, 2.0, 3.0}), DomainError);

  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<double> nx, ny;
  for (int i = 0; i < 8; ++i) {
    nx.push_back(std::pow(2.0, -i));
    ny.push_back(nx.back() * (1.0 + noise(rng)));
  }
  CHECK(std::abs(fit_power_law(nx, ny).exponent - 1.0) < 0.05);
}

TEST_CASE("sweep fits on synthetic records") {
  std::vector<SweepRecord> recs;
  for (double e : {0.4, 0.2, 0.1, 0.05}) {
    auto r = synthetic(e, 0.0);
    r.interaction_measure = 3.0 * e;
    r.ball_sup = 2.0 * std::sqrt(e);
    r.linear_ball_sup = 0.0;
    recs.push_back(r);
  }
  const auto fi = fit_interaction(recs);
  REQUIRE(fi.fit);
  CHECK(fi.fit->exponent == doctest::Approx(1.0).epsilon(1e-12));
  const auto fb = fit_ball(recs);
  REQUIRE(fb.fit);
  CHECK(fb.fit->exponent == doctest::Approx(0.5).epsilon(1e-12));

  std::vector<SweepRecord> nus;
  for (double n : {0.0, 0.4, 0.2, 0.1, 0.05}) {
    auto r = synthetic(0.2, n);
    r.nu_difference = {{0.0, 0.0}, {2.5, 5.0 * n * 2.5}};
    nus.push_back(r);
  }
  const auto fn = fit_nu(nus, 2.5);
  REQUIRE(fn.fit);
  CHECK(fn.fit->exponent == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fn.fit->points == 4);

  recs[1].diverged = true;
  recs[1].blowup_t_star = 3.0;
  const auto bad = fit_interaction(recs);
  CHECK_FALSE(bad.fit);
  CHECK(bad.diagnostic.find("diverged") != std::string::npos);

  CHECK_THROWS_AS(run_named_sweep("bogus", tiny_config()), UsageError);
}

TEST_CASE("cumulative trapezoid") {
  const auto c = cumulative_trapezoid({0.0, 1.0, 3.0}, {1.0, 3.0, 3.0});
  REQUIRE(c.size() == 3);
  CHECK(c[0] == 0.0);
  CHECK(c[1] == 2.0);
  CHECK(c[2] == 8.0);
}

TEST_CASE("configuration") {
  const auto d = default_config();
  CHECK_NOTHROW(d.validate());
  CHECK(d.grid.dims == std::vector<int>{128, 128});
  CHECK(d.epsilon_list == std::vector<double>{0.4, 0.2, 0.1, 0.05});

  const auto again = parse_config(config_to_json(d));
  CHECK(config_hash(again) == config_hash(d));
  CHECK(config_to_json(again) == config_to_json(d));

  auto other = d;
  other.output_dir = "elsewhere";
  CHECK(config_hash(other) == config_hash(d));
  other.dt = 0.005;
  CHECK(config_hash(other) != config_hash(d));

  CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"dims": [64, 64], "extra": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"weight": {"s": 0.6, "k": 3}})").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"t_end_star": 13.0})").validate(), ConfigError);
  try {
    parse_config(R"({"epsilon_list": [2.0], "nu_list": [0.3]})").validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("eps*nu <= 1/2") != std::string::npos);
  }

  const auto shipped = fs::path(ALFVENLAB_SOURCE_DIR) / "configs" / "default.json";
  REQUIRE(fs::exists(shipped));
  CHECK(config_hash(load_config(shipped.string())) == config_hash(d));
  CHECK(config_hash(load_config("default")) == config_hash(d));
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);

  const auto ts = d.sample_times(0.2);
  CHECK(ts.front() == 0.0);
  CHECK(ts.back() == d.t_end_star);
  CHECK(std::find(ts.begin(), ts.end(), d.ball_time) != ts.end());
  CHECK(std::find(ts.begin(), ts.end(), 5.0) != ts.end());  // original t = 1 at eps = 0.2
  CHECK(std::is_sorted(ts.begin(), ts.end()));
  CHECK(std::adjacent_find(ts.begin(), ts.end()) == ts.end());
}

TEST_CASE("single runs") {
  const auto cfg = tiny_config();

  SUBCASE("zero data") {
    auto c = cfg;
    c.init.amplitude = 0.0;
    const auto r = run_single(c, 0.2, 0.0);
    CHECK(r.E0 == 0.0);
    for (const auto& s : r.samples) {
      CHECK(s.E == 0.0);
      CHECK(s.W == 0.0);
      CHECK(s.D == 0.0);
    }
    CHECK(r.interaction_measure == 0.0);
    for (const auto& o : report_original_variables(r, 0.2)) {
      CHECK(o.sup_v == 0.0);
      CHECK(o.sup_h == 0.0);
    }
  }
  SUBCASE("eps = 0 decouples") {
    // only the RK4 error against the exact propagator is left, and it is squared in E
    const auto r = run_single(cfg, 0.0, 0.0);
    CHECK_FALSE(r.diverged);
    auto fine = cfg;
    fine.dt = cfg.dt / 2;
    const auto rf = run_single(fine, 0.0, 0.0);
    MESSAGE("eps = 0 interaction " << r.interaction_measure << " -> " << rf.interaction_measure);
    CHECK(rf.interaction_measure < r.interaction_measure / 100.0);
    CHECK(r.interaction_measure < 1e-4 * run_single(cfg, 0.2, 0.0).interaction_measure);
  }
  SUBCASE("deterministic and bounded") {
    const auto a = run_single(cfg, 0.2, 0.0);
    const auto b = run_single(cfg, 0.2, 0.0);
    CHECK_FALSE(a.diverged);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(report_csv_row(a.samples[i]) == report_csv_row(b.samples[i]));
    CHECK(a.uniformity_ratio == b.uniformity_ratio);
    CHECK(a.uniformity_ratio >= 1.0 - 1e-12);
    CHECK(a.uniformity_ratio < 10.0);
    CHECK(a.valid_samples >= 11);
    CHECK(a.ball_sup >= 0.0);
    CHECK(a.samples.front().t_star == 0.0);
    CHECK(a.error_samples.front().E == 0.0);
  }
  SUBCASE("original variables at t = 0") {
    const auto r = run_single(cfg, 0.2, 0.0);
    const auto grid = Grid::make(cfg.grid);
    const auto d = make_initial_data(cfg.init, grid);
    const auto [v, h] = from_elsasser(d.plus, d.minus);
    double sv = 0.0, sh = 0.0;
    for (double m : transform_to_physical(v).magnitude()) sv = std::max(sv, m);
    for (double m : transform_to_physical(h).magnitude()) sh = std::max(sh, m);
    REQUIRE_FALSE(r.original.empty());
    CHECK(r.original.front().t == 0.0);
    CHECK(std::abs(r.original.front().sup_v - sv) < 1e-14);
    CHECK(std::abs(r.original.front().sup_h - sh) < 1e-14);
    CHECK_THROWS_AS(report_original_variables(r, 0.3), UsageError);
  }
}

TEST_CASE("error functional shrinks with eps") {
  const auto records = run_all(tiny_config(), 1);
  REQUIRE(records.size() == 3);
  CHECK(records[0].epsilon == 0.1);
  CHECK(records[0].interaction_measure < records[1].interaction_measure);
  CHECK(records[1].interaction_measure < records[2].interaction_measure);

  // fixed original time t = 1 sampled at t* = 1/eps: the ball supremum of v falls with eps
  auto at_t1 = [](const SweepRecord& r) {
    for (const auto& o : r.original)
      if (std::abs(o.t - 1.0) < 1e-9) return o.ball_sup_v;
    return -1.0;
  };
  const double v02 = at_t1(records[1]), v04 = at_t1(records[2]);
  REQUIRE(v02 >= 0.0);
  REQUIRE(v04 >= 0.0);
  CHECK(v02 < v04);

  SUBCASE("concurrent and sequential sweeps agree") {
    const auto par = run_all(tiny_config(), 3);
    REQUIRE(par.size() == records.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
      CHECK(par[i].interaction_measure == records[i].interaction_measure);
      CHECK(par[i].uniformity_ratio == records[i].uniformity_ratio);
      CHECK(par[i].ball_sup == records[i].ball_sup);
    }
  }
}

TEST_CASE("nu sweep pairs runs from identical data") {
  auto cfg = tiny_config();
  cfg.nu.nu_list = std::vector<double>{0.0, 0.4, 0.2, 0.1};
  const auto s = sweep_nu_limit(cfg);
  REQUIRE(s.records.size() == 4);
  CHECK(s.records[0].nu == 0.0);
  for (const auto& d : s.records[0].nu_difference) CHECK(d.value == 0.0);
  for (std::size_t i = 1; i < s.records.size(); ++i) {
    const auto& nd = s.records[i].nu_difference;
    REQUIRE(nd.size() >= 3);
    CHECK(nd.front().value == 0.0);
    CHECK(nd[1].value < nd[2].value);
  }
  REQUIRE(s.fit);
  CHECK(s.fit->points == 3);
  CHECK(s.fit->exponent > 0.0);
}

TEST_CASE("records round trip and aggregation") {
  const auto dir = fs::temp_directory_path() / "alfvenlab_records_test";
  fs::remove_all(dir);
  auto cfg = tiny_config();
  cfg.epsilon_list = {0.2};
  SweepResult s;
  s.name = "run";
  s.config_hash = config_hash(cfg);
  s.records = run_all(cfg, 1);
  const auto path = write_sweep_outputs(dir.string(), s);
  CHECK(fs::exists(path));
  CHECK(fs::exists(dir / "run_eps0.2_nu0.csv"));
  CHECK(fs::exists(dir / "run_eps0.2_nu0_error.csv"));
  CHECK(fs::exists(dir / "run_eps0.2_nu0_original.csv"));
  const auto csv = slurp(dir / "run_eps0.2_nu0.csv");
  CHECK(csv.find("# format_version=1") == 0);
  CHECK(csv.find("# config_hash=" + s.config_hash) != std::string::npos);

  // same config, same numbers
  const auto second = dir / "again";
  SweepResult s2 = s;
  s2.records = run_all(cfg, 1);
  write_sweep_outputs(second.string(), s2);
  CHECK(slurp(second / "run_eps0.2_nu0.csv") == csv);

  const auto back = sweep_from_json(nlohmann::json::parse(slurp(path)));
  REQUIRE(back.records.size() == 1);
  CHECK(back.records[0].interaction_measure == s.records[0].interaction_measure);
  CHECK(back.records[0].data_hash == s.records[0].data_hash);
  CHECK(back.config_hash == s.config_hash);

  const auto summary = aggregate_reports(dir.string(), (dir / "report").string());
  CHECK(summary.sweep_files == 1);
  CHECK(summary.records == 1);
  CHECK(fs::exists(dir / "report" / "summary.csv"));
  CHECK(fs::exists(dir / "report" / "summary.json"));
  CHECK(fs::exists(dir / "report" / "run_scaling.dat"));

  const auto empty = dir / "empty";
  fs::create_directories(empty);
  CHECK_THROWS_AS(aggregate_reports(empty.string(), empty.string()), ConfigError);
  fs::remove_all(dir);
}

}  // TEST_SUITE
