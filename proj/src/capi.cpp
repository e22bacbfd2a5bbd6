#include "alfvenlab/alfvenlab.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "acceptance.hpp"
#include "checkpoint.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "functionals.hpp"
#include "records.hpp"

struct alf_config {
  alfven::RunConfig cfg;
};

struct alf_state {
  alfven::ElsasserState state;
};

namespace {

thread_local std::string g_last_error;

alf_status status_of(alfven::ErrorKind k) {
  switch (k) {
    case alfven::ErrorKind::config: return ALF_ERR_CONFIG;
    case alfven::ErrorKind::domain: return ALF_ERR_DOMAIN;
    case alfven::ErrorKind::usage: return ALF_ERR_USAGE;
    case alfven::ErrorKind::blow_up: return ALF_ERR_BLOWUP;
    case alfven::ErrorKind::io: return ALF_ERR_IO;
  }
  return ALF_ERR_INTERNAL;
}

template <class F>
alf_status guarded(F&& f) {
  try {
    return f();
  } catch (const alfven::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ALF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ALF_ERR_INTERNAL;
  }
}

alf_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return ALF_ERR_NULL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(alf_line_fn fn, void* user, const std::string& line) {
  if (fn) fn(line.c_str(), user);
}

std::string record_line(const alfven::SweepRecord& r) {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "eps=%g nu=%g A=%g E0=%.6g interaction=%.6g ball_sup=%.6g uniformity=%.6g diverged=%d (%.1f s)",
                r.epsilon, r.nu, r.amplitude, r.E0, r.interaction_measure, r.ball_sup, r.uniformity_ratio,
                r.diverged ? 1 : 0, r.wall_seconds);
  return buf;
}

std::string fit_line(const alfven::SweepResult& s) {
  if (!s.fit) return "fit: none (" + s.diagnostic + ")";
  char buf[160];
  std::snprintf(buf, sizeof buf, "fit: exponent=%.6f r2=%.6f points=%d", s.fit->exponent, s.fit->r_squared,
                s.fit->points);
  return buf;
}

std::string out_dir_of(const alf_config* c, const char* out_dir) {
  return out_dir && *out_dir ? std::string(out_dir) : c->cfg.output_dir;
}

}  // namespace

extern "C" {

const char* alf_version(void) { return "0.1.0"; }

const char* alf_last_error(void) { return g_last_error.c_str(); }

const char* alf_status_name(alf_status status) {
  switch (status) {
    case ALF_OK: return "ok";
    case ALF_ERR_CONFIG: return "config error";
    case ALF_ERR_DOMAIN: return "domain error";
    case ALF_ERR_USAGE: return "usage error";
    case ALF_ERR_BLOWUP: return "blow-up";
    case ALF_ERR_IO: return "i/o error";
    case ALF_ERR_CRITERION: return "criterion failed";
    case ALF_ERR_NULL: return "null argument";
    case ALF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void alf_string_free(char* s) { std::free(s); }

alf_status alf_config_load(const char* name_or_path, alf_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    auto cfg = alfven::load_config(name_or_path ? name_or_path : "default");
    *out = new alf_config{std::move(cfg)};
    return ALF_OK;
  });
}

alf_status alf_config_parse(const char* json_text, alf_config** out) {
  if (!json_text) return null_arg("json_text");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new alf_config{alfven::parse_config(json_text)};
    return ALF_OK;
  });
}

void alf_config_free(alf_config* cfg) { delete cfg; }

alf_status alf_config_set_seed(alf_config* cfg, uint64_t seed) {
  if (!cfg) return null_arg("cfg");
  cfg->cfg.init.seed = seed;
  return ALF_OK;
}

alf_status alf_config_validate(const alf_config* cfg) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    cfg->cfg.validate();
    return ALF_OK;
  });
}

alf_status alf_config_to_json(const alf_config* cfg, char** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = dup_string(alfven::config_to_json(cfg->cfg));
    return ALF_OK;
  });
}

alf_status alf_config_hash(const alf_config* cfg, char** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = dup_string(alfven::config_hash(cfg->cfg));
    return ALF_OK;
  });
}

alf_status alf_run(const alf_config* cfg, int threads, const char* out_dir, alf_line_fn on_line, void* user) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    alfven::SweepResult s;
    s.name = "run";
    s.config_hash = alfven::config_hash(cfg->cfg);
    s.records = alfven::run_all(cfg->cfg, threads);
    for (const auto& r : s.records) emit(on_line, user, record_line(r));
    for (const auto& r : s.records)
      if (r.diverged && s.diagnostic.empty()) s.diagnostic = r.message;
    const auto path = alfven::write_sweep_outputs(out_dir_of(cfg, out_dir), s);
    emit(on_line, user, "wrote " + path);
    return ALF_OK;
  });
}

alf_status alf_sweep(const alf_config* cfg, const char* name, int threads, const char* out_dir, alf_line_fn on_line,
                     void* user) {
  if (!cfg) return null_arg("cfg");
  if (!name) return null_arg("name");
  return guarded([&] {
    const auto s = alfven::run_named_sweep(name, cfg->cfg, threads);
    for (const auto& r : s.records) emit(on_line, user, record_line(r));
    for (const auto& r : s.extra_records) emit(on_line, user, "large-data " + record_line(r));
    if (s.name != "uniformity") emit(on_line, user, fit_line(s));
    for (const auto& [k, v] : s.metrics) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%s=%.6g", k.c_str(), v);
      emit(on_line, user, buf);
    }
    const auto path = alfven::write_sweep_outputs(out_dir_of(cfg, out_dir), s);
    emit(on_line, user, "wrote " + path);
    return ALF_OK;
  });
}

alf_status alf_report(const char* in_dir, const char* out_dir, alf_line_fn on_line, void* user) {
  if (!in_dir) return null_arg("in_dir");
  return guarded([&] {
    const auto summary = alfven::aggregate_reports(in_dir, out_dir && *out_dir ? out_dir : in_dir);
    emit(on_line, user,
         "aggregated " + std::to_string(summary.records) + " records from " + std::to_string(summary.sweep_files) +
             " sweep files");
    for (const auto& p : summary.outputs) emit(on_line, user, "wrote " + p);
    return ALF_OK;
  });
}

alf_status alf_verify(const alf_config* cfg, int threads, const char* out_dir, const int* criteria, size_t count,
                      alf_line_fn on_line, void* user, int* failed) {
  if (!cfg) return null_arg("cfg");
  if (count > 0 && !criteria) return null_arg("criteria");
  return guarded([&] {
    alfven::AcceptanceOptions opts;
    opts.threads = threads;
    if (out_dir) opts.out_dir = out_dir;
    opts.only.assign(criteria, criteria + count);
    opts.on_line = [&](const std::string& l) { emit(on_line, user, l); };
    const auto results = alfven::run_acceptance(cfg->cfg, opts);
    int bad = 0;
    for (const auto& r : results) bad += r.passed ? 0 : 1;
    if (failed) *failed = bad;
    if (bad > 0) {
      g_last_error = std::to_string(bad) + " acceptance criteria failed";
      return ALF_ERR_CRITERION;
    }
    return ALF_OK;
  });
}

alf_status alf_state_initial(const alf_config* cfg, double epsilon, double nu, alf_state** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto& c = cfg->cfg;
    c.grid.validate();
    const auto grid = alfven::Grid::make(c.grid);
    const auto data = alfven::make_initial_data(c.init, grid, c.init.effective_amplitude(epsilon));
    auto st = std::make_unique<alf_state>();
    st->state.plus = data.plus;
    st->state.minus = data.minus;
    st->state.epsilon = epsilon;
    st->state.nu = nu;
    st->state.data_hash = alfven::data_hash(data.plus, data.minus);
    st->state.validate();
    *out = st.release();
    return ALF_OK;
  });
}

void alf_state_free(alf_state* state) { delete state; }

alf_status alf_state_step(alf_state* state, double dt, int steps) {
  if (!state) return null_arg("state");
  return guarded([&] {
    if (steps < 0) throw alfven::UsageError("step count must be non-negative");
    for (int i = 0; i < steps; ++i) state->state = alfven::step_rk4(state->state, dt);
    return ALF_OK;
  });
}

alf_status alf_state_get_info(const alf_state* state, alf_state_info* out) {
  if (!state) return null_arg("state");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto& s = state->state;
    const auto& spec = s.grid()->spec();
    *out = alf_state_info{};
    out->ndim = spec.ndim();
    for (int a = 0; a < 3; ++a) out->dims[a] = a < spec.ndim() ? spec.dims[a] : 1;
    out->half_length = spec.half_length;
    out->t_star = s.t_star;
    out->epsilon = s.epsilon;
    out->nu = s.nu;
    out->max_divergence = std::max(alfven::max_abs_divergence(s.plus), alfven::max_abs_divergence(s.minus));
    out->norm_plus = alfven::norm_squared(s.plus);
    out->norm_minus = alfven::norm_squared(s.minus);
    return ALF_OK;
  });
}

alf_status alf_state_measure(const alf_state* state, double s, int k, alf_functionals* out) {
  if (!state) return null_arg("state");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto spec = alfven::WeightSpec::make(s, k);
    const auto r = alfven::measure(state->state, spec, {});
    *out = alf_functionals{r.E, r.W, r.D, r.e_inverse, r.e_zeroth};
    return ALF_OK;
  });
}

alf_status alf_checkpoint_write(const alf_state* state, const char* path, double s, int k, int precision) {
  if (!state) return null_arg("state");
  if (!path) return null_arg("path");
  return guarded([&] {
    if (precision != 64 && precision != 128) throw alfven::UsageError("precision must be 64 or 128");
    alfven::write_checkpoint(path, state->state, s, k,
                             precision == 64 ? alfven::Precision::complex64 : alfven::Precision::complex128);
    return ALF_OK;
  });
}

alf_status alf_checkpoint_read(const char* path, alf_state** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto ck = alfven::read_checkpoint(path);
    *out = new alf_state{std::move(ck.state)};
    return ALF_OK;
  });
}

}  // extern "C"
