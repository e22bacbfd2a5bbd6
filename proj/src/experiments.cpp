#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "dynamics.hpp"
#include "errors.hpp"

namespace alfven {

namespace {

double support_reach(const RunConfig& cfg) {
  double cmax = 0.0;
  for (const auto& c : {cfg.init.center_plus, cfg.init.center_minus}) {
    double r2 = 0.0;
    for (int a = 0; a < cfg.grid.ndim(); ++a) r2 += c[a] * c[a];
    cmax = std::max(cmax, std::sqrt(r2));
  }
  return cmax + cfg.init.support_radius + cfg.init.center_jitter * std::sqrt(cfg.grid.ndim());
}

bool same_time(double a, double b, double dt) { return std::abs(a - b) <= 0.5 * dt; }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void sort_records(std::vector<SweepRecord>& r) {
  std::stable_sort(r.begin(), r.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return a.epsilon != b.epsilon ? a.epsilon < b.epsilon : a.nu < b.nu;
  });
}

std::string first_divergence(const std::vector<SweepRecord>& records) {
  for (const auto& r : records) {
    if (r.diverged)
      return "run eps=" + fmt(r.epsilon) + " nu=" + fmt(r.nu) + " diverged at t*=" + fmt(r.blowup_t_star) + ": " +
             r.message;
  }
  return {};
}

}  // namespace

std::vector<double> cumulative_trapezoid(const std::vector<double>& ts, const std::vector<double>& ys) {
  std::vector<double> out(ts.size(), 0.0);
  for (std::size_t i = 1; i < ts.size(); ++i) out[i] = out[i - 1] + 0.5 * (ts[i] - ts[i - 1]) * (ys[i] + ys[i - 1]);
  return out;
}

OriginalSample original_sample(const ElsasserState& state, double ball_radius, double s) {
  const auto& g = *state.grid();
  const int n = g.ndim();
  auto [v, h] = from_elsasser(state.plus, state.minus);
  const auto mv = transform_to_physical(v).magnitude();
  const auto mh = transform_to_physical(h).magnitude();
  OriginalSample o;
  o.t_star = state.t_star;
  o.t = state.epsilon > 0.0 ? original_time(state.t_star, state.epsilon) : 0.0;
  for (std::size_t p = 0; p < g.physical_size(); ++p) {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) {
      x[a] = g.coordinate(p, a);
      r2 += x[a] * x[a];
    }
    o.sup_v = std::max(o.sup_v, mv[p]);
    o.sup_h = std::max(o.sup_h, mh[p]);
    if (r2 < ball_radius * ball_radius) {
      o.ball_sup_v = std::max(o.ball_sup_v, mv[p]);
      o.ball_sup_h = std::max(o.ball_sup_h, mh[p]);
    }
    const double profile =
        moving_weight(x, n, state.t_star, +1, -s) + moving_weight(x, n, state.t_star, -1, -s);
    o.weighted_decay = std::max(o.weighted_decay, std::max(mv[p], mh[p]) / profile);
  }
  return o;
}

std::vector<OriginalSample> report_original_variables(const SweepRecord& record, double epsilon) {
  if (record.epsilon != epsilon) throw UsageError("record was produced with a different eps");
  auto out = record.original;
  for (auto& o : out) o.t = epsilon > 0.0 ? original_time(o.t_star, epsilon) : 0.0;
  return out;
}

SweepRecord run_single(const RunConfig& cfg, double epsilon, double nu, const RunLinks& links) {
  const auto start = std::chrono::steady_clock::now();
  if (epsilon * nu > 0.5) throw ConfigError("hypothesis eps*nu <= 1/2 violated");
  const GridPtr grid = links.grid ? links.grid : Grid::make(cfg.grid);
  const auto spec = WeightSpec::make(cfg.s, cfg.k);
  MeasurementOptions mo;
  mo.ball_radius = cfg.ball_radius;
  mo.support_radius = support_reach(cfg);

  SweepRecord rec;
  rec.epsilon = epsilon;
  rec.nu = nu;
  rec.amplitude = cfg.init.effective_amplitude(epsilon);
  rec.ball_time = cfg.ball_time;
  rec.config_hash = config_hash(cfg);

  const auto data = make_initial_data(cfg.init, grid, rec.amplitude);
  ElsasserState s0;
  s0.plus = data.plus;
  s0.minus = data.minus;
  s0.epsilon = epsilon;
  s0.nu = nu;
  s0.data_hash = data_hash(data.plus, data.minus);
  s0.validate();
  rec.data_hash = s0.data_hash;
  rec.support_leakage = data.support_leakage;
  rec.E0 = initial_energy(s0.plus, s0.minus, spec, nu);

  TimeStepperConfig ts;
  ts.dt = cfg.dt;
  ts.scheme = cfg.scheme;
  ts.t_end = cfg.t_end_star;
  ts.sample_times = cfg.sample_times(epsilon);

  auto sink = [&](const ElsasserState& st) {
    rec.samples.push_back(measure(st, spec, mo));
    auto [lp, lm] = linear_evolve(s0.plus, s0.minus, st.t_star, epsilon, nu);
    auto [ep, em] = error_field(st, lp, lm, st.t_star);
    rec.error_samples.push_back(error_functionals(ep, em, st.t_star, nu, spec, mo));
    if (same_time(st.t_star, cfg.ball_time, cfg.dt)) {
      rec.ball_sup = rec.samples.back().ball_sup;
      rec.linear_ball_sup = std::max(ball_sup(lp, cfg.ball_radius), ball_sup(lm, cfg.ball_radius));
    }
    rec.original.push_back(original_sample(st, cfg.ball_radius, cfg.s));
    if (links.reference) {
      for (const auto& ref : *links.reference) {
        if (!same_time(ref.t_star, st.t_star, cfg.dt)) continue;
        ElsasserState aligned = ref;
        aligned.t_star = st.t_star;
        auto [dp, dm] = nu_difference(st, aligned);
        rec.nu_difference.push_back(
            {st.t_star, sobolev_norm_squared(dp, cfg.k - 1) + sobolev_norm_squared(dm, cfg.k - 1)});
        break;
      }
    }
    if (links.keep) links.keep->push_back(st);
  };

  try {
    evolve(s0, ts, sink);
  } catch (const BlowUpError& e) {
    rec.diverged = true;
    rec.blowup_t_star = e.t_star();
    rec.message = e.what();
  }

  // time-integrated quantities by the trapezoid rule over the samples
  std::vector<double> t, w, wd_err;
  std::vector<double> wd;
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    const auto& a = rec.samples[i];
    const auto& e = rec.error_samples[i];
    t.push_back(a.t_star);
    w.push_back(a.W);
    wd.push_back(a.W + epsilon * nu * a.D);
    wd_err.push_back(e.W + epsilon * nu * e.D);
  }
  const auto int_w = cumulative_trapezoid(t, w);
  const auto int_wd = cumulative_trapezoid(t, wd);
  const auto int_err = cumulative_trapezoid(t, wd_err);
  rec.integral_W = int_w.empty() ? 0.0 : int_w.back();
  bool first = true;
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    const auto& a = rec.samples[i];
    rec.interaction_measure = std::max(rec.interaction_measure, rec.error_samples[i].E + int_err[i]);
    if (rec.E0 > 0.0) rec.uniformity_ratio = std::max(rec.uniformity_ratio, (a.E + int_wd[i]) / rec.E0);
    if (!a.valid) continue;
    ++rec.valid_samples;
    if (first) {
      rec.decay_max_plus = rec.decay_min_plus = a.decay_plus;
      rec.decay_max_minus = rec.decay_min_minus = a.decay_minus;
      first = false;
    }
    rec.decay_max_plus = std::max(rec.decay_max_plus, a.decay_plus);
    rec.decay_min_plus = std::min(rec.decay_min_plus, a.decay_plus);
    rec.decay_max_minus = std::max(rec.decay_max_minus, a.decay_minus);
    rec.decay_min_minus = std::min(rec.decay_min_minus, a.decay_minus);
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<SweepRecord> run_tasks(const std::vector<std::function<SweepRecord()>>& tasks, int threads) {
  std::vector<SweepRecord> out(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        out[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<SweepRecord> run_all(const RunConfig& cfg, int threads) {
  cfg.validate();
  const GridPtr grid = Grid::make(cfg.grid);
  std::vector<std::pair<double, double>> pairs;
  for (double e : cfg.epsilon_list)
    for (double n : cfg.nu_list) pairs.emplace_back(e, n);
  std::sort(pairs.begin(), pairs.end());
  std::vector<std::function<SweepRecord()>> tasks;
  for (const auto& [e, n] : pairs) {
    tasks.push_back([&cfg, grid, e = e, n = n] {
      RunLinks links;
      links.grid = grid;
      return run_single(cfg, e, n, links);
    });
  }
  auto out = run_tasks(tasks, threads);
  sort_records(out);
  return out;
}

SweepResult fit_interaction(std::vector<SweepRecord> records) {
  sort_records(records);
  SweepResult r;
  r.name = "interaction";
  r.records = std::move(records);
  r.diagnostic = first_divergence(r.records);
  if (!r.diagnostic.empty()) return r;
  std::vector<double> xs, ys;
  for (const auto& rec : r.records) {
    if (rec.epsilon <= 0.0) continue;
    xs.push_back(rec.epsilon);
    ys.push_back(rec.interaction_measure);
  }
  if (xs.size() < 4) {
    r.diagnostic = "interaction sweep needs at least 4 positive eps values";
    return r;
  }
  try {
    r.fit = fit_power_law(xs, ys);
  } catch (const DomainError& e) {
    r.diagnostic = e.what();
  }
  return r;
}

SweepResult fit_ball(std::vector<SweepRecord> records) {
  sort_records(records);
  SweepResult r;
  r.name = "ball";
  r.records = std::move(records);
  r.diagnostic = first_divergence(r.records);
  double lin = 0.0;
  for (const auto& rec : r.records)
    if (rec.amplitude > 0.0) lin = std::max(lin, rec.linear_ball_sup / rec.amplitude);
  r.metrics["max_linear_ball_sup_over_A"] = lin;
  if (!r.diagnostic.empty()) return r;
  std::vector<double> xs, ys;
  for (const auto& rec : r.records) {
    if (rec.epsilon <= 0.0) continue;
    if (rec.ball_sup < 0.0) {
      r.diagnostic = "ball time was not sampled for eps=" + fmt(rec.epsilon);
      return r;
    }
    xs.push_back(rec.epsilon);
    ys.push_back(rec.ball_sup);
  }
  try {
    r.fit = fit_power_law(xs, ys);
  } catch (const DomainError& e) {
    r.diagnostic = e.what();
  }
  return r;
}

SweepResult fit_nu(std::vector<SweepRecord> records, double nu_time) {
  sort_records(records);
  SweepResult r;
  r.name = "nu";
  r.records = std::move(records);
  r.metrics["nu_time"] = nu_time;
  r.diagnostic = first_divergence(r.records);
  if (!r.diagnostic.empty()) return r;
  std::vector<double> xs, ys;
  double spread = 1.0;
  for (const auto& rec : r.records) {
    if (rec.nu <= 0.0) continue;
    bool found = false;
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (const auto& d : rec.nu_difference) {
      if (std::abs(d.t_star - nu_time) <= 1e-9 * std::max(1.0, nu_time)) {
        xs.push_back(rec.nu);
        ys.push_back(d.value);
        found = true;
      }
      if (d.t_star > 0.0 && d.t_star <= nu_time + 1e-9) {
        const double q = d.value / d.t_star;
        lo = any ? std::min(lo, q) : q;
        hi = any ? std::max(hi, q) : q;
        any = true;
      }
    }
    if (any && lo > 0.0) spread = std::max(spread, hi / lo);
    if (!found) {
      r.diagnostic = "nu-difference not sampled at t*=" + fmt(nu_time) + " for nu=" + fmt(rec.nu);
      return r;
    }
  }
  r.metrics["time_linearity_spread"] = spread;
  try {
    r.fit = fit_power_law(xs, ys);
  } catch (const DomainError& e) {
    r.diagnostic = e.what();
  }
  return r;
}

SweepResult sweep_interaction_vanishing(const RunConfig& base, int threads) {
  const auto cfg = base.with(base.interaction);
  if (cfg.nu_list.size() != 1) throw ConfigError("interaction sweep needs a single nu");
  auto r = fit_interaction(run_all(cfg, threads));
  r.config_hash = config_hash(cfg);
  return r;
}

void validate_ball_sweep(const RunConfig& cfg) {
  if (cfg.nu_list.size() != 1 || cfg.nu_list[0] != 0.0) throw ConfigError("ball sweep needs nu = 0");
  const double R = cfg.ball_radius;
  if (!(cfg.ball_time > 2.0 * R) || !(cfg.ball_time + support_reach(cfg) < cfg.grid.half_length) ||
      cfg.ball_time > cfg.t_end_star)
    throw ConfigError("ball_time must lie in (2R, L - R) and not exceed t_end_star");
}

SweepResult sweep_ball_decay(const RunConfig& base, int threads) {
  const auto cfg = base.with(base.ball);
  validate_ball_sweep(cfg);
  auto r = fit_ball(run_all(cfg, threads));
  r.config_hash = config_hash(cfg);
  return r;
}

SweepResult sweep_nu_limit(const RunConfig& base, int threads) {
  auto cfg = base.with(base.nu);
  if (cfg.epsilon_list.size() != 1) throw ConfigError("nu sweep needs a single eps");
  if (cfg.nu_time > cfg.t_end_star) throw ConfigError("nu_time exceeds t_end_star");
  cfg.validate();
  const double eps = cfg.epsilon_list[0];
  const GridPtr grid = Grid::make(cfg.grid);

  std::vector<ElsasserState> reference;
  RunLinks ref_links;
  ref_links.grid = grid;
  ref_links.keep = &reference;
  ref_links.reference = nullptr;
  SweepRecord ref = run_single(cfg, eps, 0.0, ref_links);
  for (const auto& st : reference) ref.nu_difference.push_back({st.t_star, 0.0});

  std::vector<double> nus = cfg.nu_list;
  std::sort(nus.begin(), nus.end());
  std::vector<std::function<SweepRecord()>> tasks;
  for (double nu : nus) {
    if (nu == 0.0) continue;
    tasks.push_back([&cfg, &reference, grid, eps, nu] {
      RunLinks links;
      links.grid = grid;
      links.reference = &reference;
      return run_single(cfg, eps, nu, links);
    });
  }
  auto records = run_tasks(tasks, threads);
  if (std::find(nus.begin(), nus.end(), 0.0) != nus.end()) records.push_back(ref);
  auto r = fit_nu(std::move(records), cfg.nu_time);
  r.config_hash = config_hash(cfg);
  return r;
}

SweepResult sweep_uniformity(const RunConfig& base, int threads) {
  const auto cfg = base.with(base.uniformity);
  const auto big = base.with(base.large_data);
  SweepResult r;
  r.name = "uniformity";
  r.config_hash = config_hash(cfg);
  r.records = run_all(cfg, threads);
  r.extra_records = run_all(big, threads);
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& rec : r.records) {
    if (rec.diverged || !(rec.E0 > 0.0)) continue;
    lo = any ? std::min(lo, rec.uniformity_ratio) : rec.uniformity_ratio;
    hi = any ? std::max(hi, rec.uniformity_ratio) : rec.uniformity_ratio;
    any = true;
  }
  r.metrics["min_ratio"] = lo;
  r.metrics["max_ratio"] = hi;
  r.metrics["ratio_spread"] = any && lo > 0.0 ? hi / lo : 0.0;
  double diverged = 0.0, big_diverged = 0.0;
  for (const auto& rec : r.records) diverged += rec.diverged ? 1.0 : 0.0;
  for (const auto& rec : r.extra_records) big_diverged += rec.diverged ? 1.0 : 0.0;
  r.metrics["diverged_runs"] = diverged;
  r.metrics["large_data_diverged_runs"] = big_diverged;
  r.diagnostic = first_divergence(r.records);
  if (r.diagnostic.empty()) r.diagnostic = first_divergence(r.extra_records);
  return r;
}

SweepResult run_named_sweep(const std::string& name, const RunConfig& cfg, int threads) {
  if (name == "interaction") return sweep_interaction_vanishing(cfg, threads);
  if (name == "ball") return sweep_ball_decay(cfg, threads);
  if (name == "nu") return sweep_nu_limit(cfg, threads);
  if (name == "uniformity") return sweep_uniformity(cfg, threads);
  throw UsageError("unknown sweep '" + name + "' (expected interaction|ball|nu|uniformity)");
}

}  // namespace alfven
