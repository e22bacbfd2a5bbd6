#include "dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "errors.hpp"

namespace alfven {

namespace {

void require_vector_pair(const SpectralVectorField& lp, const SpectralVectorField& lm, const char* what) {
  require_compatible(lp, lm, what);
  if (lp.components() != lp.grid()->ndim()) throw ConfigError(std::string(what) + ": fields must have n components");
}

std::vector<RealArray> physical_components(const SpectralVectorField& f) {
  const auto& g = *f.grid();
  std::vector<RealArray> out(f.components(), RealArray(g.physical_size()));
  for (int c = 0; c < f.components(); ++c) g.inverse(f[c].data(), out[c].data());
  return out;
}

double max_magnitude(const std::vector<RealArray>& comps) {
  double m2 = 0.0;
  for (std::size_t p = 0; p < comps[0].size(); ++p) {
    double s = 0.0;
    for (const auto& c : comps) s += c[p] * c[p];
    m2 = std::max(m2, s);
  }
  return std::sqrt(m2);
}

// Pressure from already-transformed dealiased samples of both fields.
SpectralVectorField pressure_from_samples(const GridPtr& grid, const std::vector<RealArray>& lp,
                                          const std::vector<RealArray>& lm, double epsilon) {
  const auto& g = *grid;
  const int n = g.ndim();
  const std::size_t np = g.physical_size();
  SpectralVectorField p(grid, 1);
  ComplexArray fp(g.spectral_size());
  RealArray prod(np);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (std::size_t q = 0; q < np; ++q) prod[q] = lm[i][q] * lp[j][q];
      g.forward(prod.data(), fp.data());
      for (std::size_t idx = 1; idx < g.spectral_size(); ++idx) {
        if (!g.kept(idx)) continue;
        p[0][idx] -= epsilon * g.wavenumber(idx, i) * g.wavenumber(idx, j) * fp[idx] / g.k2(idx);
      }
    }
  }
  p[0][0] = 0.0;
  p.set_dealiased(true);
  return p;
}

void check_finite(const SpectralVectorField& f, double t_star, const char* what) {
  if (blown_up(f)) throw BlowUpError(t_star, std::string("non-finite or oversized coefficients in ") + what);
}

struct Workspace {
  std::vector<RealArray> phys;   // [field][component]
  std::vector<RealArray> deriv;  // [field][axis][component]
  RealArray prod;
  ComplexArray cut, tmp;

  void resize(std::size_t np, std::size_t ns, int n) {
    if (prod.size() == np && cut.size() == ns && static_cast<int>(phys.size()) == 2 * n) return;
    phys.assign(2 * n, RealArray(np));
    deriv.assign(2 * n * n, RealArray(np));
    prod.assign(np, 0.0);
    cut.assign(ns, Complex{});
    tmp.assign(ns, Complex{});
  }
};

// Tendency with or without the transport term +-d1.
TendencyReport tendency(const ElsasserState& s, bool with_transport) {
  const auto& grid = s.grid();
  const auto& g = *grid;
  const int n = g.ndim();
  const std::size_t np = g.physical_size();
  const std::size_t ns = g.spectral_size();
  const double eps = s.epsilon;
  const SpectralVectorField* fields[2] = {&s.plus, &s.minus};

  TendencyReport r;
  r.rhs_plus = SpectralVectorField(grid, n);
  r.rhs_minus = SpectralVectorField(grid, n);
  r.pressure = SpectralVectorField(grid, 1);
  SpectralVectorField* rhs[2] = {&r.rhs_plus, &r.rhs_minus};

  double max_lambda = 0.0;
  if (eps != 0.0) {
    thread_local Workspace ws;
    ws.resize(np, ns, n);
    // dealiased samples and first derivatives of both fields
    for (int f = 0; f < 2; ++f) {
      for (int c = 0; c < n; ++c) {
        const auto& src = (*fields[f])[c];
        for (std::size_t i = 0; i < ns; ++i) ws.cut[i] = g.kept(i) ? src[i] : Complex{};
        g.inverse(ws.cut.data(), ws.phys[f * n + c].data());
        for (int j = 0; j < n; ++j) {
          for (std::size_t i = 0; i < ns; ++i) {
            const double k = g.nyquist(i, j) ? 0.0 : g.wavenumber(i, j);
            ws.tmp[i] = Complex{-k * ws.cut[i].imag(), k * ws.cut[i].real()};
          }
          g.inverse(ws.tmp.data(), ws.deriv[(f * n + j) * n + c].data());
        }
      }
    }
    for (std::size_t q = 0; q < np; ++q) {
      double a2 = 0.0, b2 = 0.0;
      for (int c = 0; c < n; ++c) {
        a2 += ws.phys[c][q] * ws.phys[c][q];
        b2 += ws.phys[n + c][q] * ws.phys[n + c][q];
      }
      max_lambda = std::max(max_lambda, std::max(a2, b2));
    }
    max_lambda = std::sqrt(max_lambda);

    // p_hat = -eps sum_ij xi_i xi_j FFT(Lm_i Lp_j) / |xi|^2
    auto& p = r.pressure[0];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const auto& lm_i = ws.phys[n + i];
        const auto& lp_j = ws.phys[j];
        for (std::size_t q = 0; q < np; ++q) ws.prod[q] = lm_i[q] * lp_j[q];
        g.forward(ws.prod.data(), ws.tmp.data());
        for (std::size_t idx = 1; idx < ns; ++idx) {
          if (!g.kept(idx)) continue;
          p[idx] -= eps * g.wavenumber(idx, i) * g.wavenumber(idx, j) * ws.tmp[idx] / g.k2(idx);
        }
      }
    }
    p[0] = 0.0;
    r.pressure.set_dealiased(true);

    // -eps (L-+ . grad) L+-
    for (int f = 0; f < 2; ++f) {
      const int other = 1 - f;
      for (int c = 0; c < n; ++c) {
        std::fill(ws.prod.begin(), ws.prod.end(), 0.0);
        for (int j = 0; j < n; ++j) {
          const auto& a = ws.phys[other * n + j];
          const auto& d = ws.deriv[(f * n + j) * n + c];
          for (std::size_t q = 0; q < np; ++q) ws.prod[q] += a[q] * d[q];
        }
        g.forward(ws.prod.data(), ws.tmp.data());
        auto& out = (*rhs[f])[c];
        for (std::size_t idx = 0; idx < ns; ++idx) out[idx] = g.kept(idx) ? -eps * ws.tmp[idx] : Complex{};
      }
    }
  }

  // linear terms and the shared pressure gradient
  const double visc = eps * s.nu;
  for (int f = 0; f < 2; ++f) {
    const double dir = f == 0 ? 1.0 : -1.0;
    auto& out = *rhs[f];
    const auto& src = *fields[f];
    for (int c = 0; c < n; ++c) {
      for (std::size_t idx = 0; idx < ns; ++idx) {
        Complex acc = out[c][idx];
        if (with_transport && !g.nyquist(idx, 0)) acc += Complex{0.0, dir * g.wavenumber(idx, 0)} * src[c][idx];
        if (eps != 0.0 && !g.nyquist(idx, c))
          acc -= Complex{0.0, g.wavenumber(idx, c)} * r.pressure[0][idx];
        if (visc != 0.0) acc -= visc * g.k2(idx) * src[c][idx];
        out[c][idx] = acc;
      }
    }
  }
  r.cfl_number = (1.0 + std::abs(eps) * max_lambda) / g.dx();
  check_finite(r.rhs_plus, s.t_star, "rhs of Lambda+");
  check_finite(r.rhs_minus, s.t_star, "rhs of Lambda-");
  return r;
}

ElsasserState shifted(const ElsasserState& base, const TendencyReport& k, double h) {
  ElsasserState out = base;
  out.plus.axpy(h, k.rhs_plus);
  out.minus.axpy(h, k.rhs_minus);
  out.t_star = base.t_star + h;
  return out;
}

ElsasserState rk4(const ElsasserState& y, double dt, bool with_transport) {
  const auto k1 = tendency(y, with_transport);
  const auto k2 = tendency(shifted(y, k1, 0.5 * dt), with_transport);
  const auto k3 = tendency(shifted(y, k2, 0.5 * dt), with_transport);
  const auto k4 = tendency(shifted(y, k3, dt), with_transport);
  ElsasserState out = y;
  out.plus.axpy(dt / 6.0, k1.rhs_plus);
  out.plus.axpy(dt / 3.0, k2.rhs_plus);
  out.plus.axpy(dt / 3.0, k3.rhs_plus);
  out.plus.axpy(dt / 6.0, k4.rhs_plus);
  out.minus.axpy(dt / 6.0, k1.rhs_minus);
  out.minus.axpy(dt / 3.0, k2.rhs_minus);
  out.minus.axpy(dt / 3.0, k3.rhs_minus);
  out.minus.axpy(dt / 6.0, k4.rhs_minus);
  out.t_star = y.t_star + dt;
  return out;
}

void transport(ElsasserState& s, double t) {
  auto [p, m] = linear_evolve(s.plus, s.minus, t, 0.0, 0.0);
  s.plus = std::move(p);
  s.minus = std::move(m);
}

}  // namespace

bool blown_up(const SpectralVectorField& f) {
  for (int c = 0; c < f.components(); ++c) {
    for (const auto& z : f[c]) {
      const double a = std::abs(z);
      if (!std::isfinite(a) || a > kBlowUpThreshold) return true;
    }
  }
  return false;
}

SpectralVectorField pressure_solve(const SpectralVectorField& lp, const SpectralVectorField& lm, double epsilon) {
  require_vector_pair(lp, lm, "pressure_solve");
  if (epsilon == 0.0) {
    SpectralVectorField p(lp.grid(), 1);
    p.set_dealiased(true);
    return p;
  }
  return pressure_from_samples(lp.grid(), physical_components(dealias(lp)), physical_components(dealias(lm)),
                               epsilon);
}

TendencyReport nonlinear_rhs(const ElsasserState& state) {
  require_vector_pair(state.plus, state.minus, "nonlinear_rhs");
  return tendency(state, true);
}

double max_stable_dt(const ElsasserState& state) {
  const auto& g = *state.grid();
  const double lam =
      std::max(max_magnitude(physical_components(state.plus)), max_magnitude(physical_components(state.minus)));
  double dt = 0.5 * g.dx() / (1.0 + std::abs(state.epsilon) * lam);
  const double diff = state.epsilon * state.nu;
  if (diff > 0.0) dt = std::min(dt, 0.25 * g.dx() * g.dx() / diff);
  return dt;
}

ElsasserState step_rk4(const ElsasserState& state, double dt, Scheme scheme) {
  require_vector_pair(state.plus, state.minus, "step_rk4");
  if (!(dt != 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be finite and nonzero");
  if (dt < 0.0 && state.epsilon * state.nu > 0.0) throw ConfigError("backward steps need eps*nu = 0");
  const double limit = max_stable_dt(state);
  if (std::abs(dt) > limit * (1.0 + 1e-12)) {
    throw ConfigError("CFL violated: |dt| = " + std::to_string(std::abs(dt)) + " exceeds " + std::to_string(limit));
  }

  ElsasserState out;
  if (scheme == Scheme::rk4) {
    out = rk4(state, dt, true);
  } else {
    ElsasserState half = state;
    transport(half, 0.5 * dt);
    out = rk4(half, dt, false);
    transport(out, 0.5 * dt);
  }
  out.plus = leray_project(out.plus);
  out.minus = leray_project(out.minus);
  out.t_star = state.t_star + dt;
  check_finite(out.plus, out.t_star, "Lambda+");
  check_finite(out.minus, out.t_star, "Lambda-");
  return out;
}

ElsasserState evolve(const ElsasserState& state, const TimeStepperConfig& cfg, const SampleSink& sink) {
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  const double t0 = state.t_star;
  const double span = cfg.t_end - t0;
  const long steps = std::lround(std::abs(span) / cfg.dt);
  const double h = span >= 0.0 ? cfg.dt : -cfg.dt;

  std::set<long> sample_steps;
  for (double ts : cfg.sample_times) {
    const long i = std::lround((ts - t0) / h);
    if (i >= 0 && i <= steps) sample_steps.insert(i);
  }

  ElsasserState cur = state;
  if (sink && sample_steps.count(0)) sink(cur);
  for (long i = 1; i <= steps; ++i) {
    cur = step_rk4(cur, h, cfg.scheme);
    cur.t_star = t0 + static_cast<double>(i) * h;
    if (sink && sample_steps.count(i)) sink(cur);
  }
  return cur;
}

std::pair<SpectralVectorField, SpectralVectorField> linear_evolve(const SpectralVectorField& plus0,
                                                                  const SpectralVectorField& minus0, double t_star,
                                                                  double epsilon, double nu) {
  require_compatible(plus0, minus0, "linear_evolve");
  const auto& g = *plus0.grid();
  SpectralVectorField p = plus0, m = minus0;
  const double damp = epsilon * nu * t_star;
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    const double decay = std::exp(-damp * g.k2(i));
    const double phase = g.wavenumber(i, 0) * t_star;
    const Complex mp = std::polar(decay, phase);
    const Complex mm = std::conj(mp);
    for (int c = 0; c < p.components(); ++c) {
      p[c][i] *= mp;
      m[c][i] *= mm;
    }
  }
  return {std::move(p), std::move(m)};
}

std::pair<SpectralVectorField, SpectralVectorField> error_field(const ElsasserState& state,
                                                                const SpectralVectorField& linear_plus,
                                                                const SpectralVectorField& linear_minus,
                                                                double linear_t_star) {
  if (std::abs(linear_t_star - state.t_star) > 1e-12 * std::max(1.0, std::abs(state.t_star)))
    throw UsageError("error_field: nonlinear and linear states are at different times");
  require_compatible(state.plus, linear_plus, "error_field");
  require_compatible(state.minus, linear_minus, "error_field");
  return {state.plus - linear_plus, state.minus - linear_minus};
}

std::pair<SpectralVectorField, SpectralVectorField> nu_difference(const ElsasserState& state_nu,
                                                                  const ElsasserState& state_0) {
  require_compatible(state_nu.plus, state_0.plus, "nu_difference");
  if (state_nu.epsilon != state_0.epsilon) throw UsageError("nu_difference: runs use different eps");
  if (state_nu.data_hash != state_0.data_hash) throw UsageError("nu_difference: runs started from different data");
  if (std::abs(state_nu.t_star - state_0.t_star) > 1e-12 * std::max(1.0, std::abs(state_0.t_star)))
    throw UsageError("nu_difference: states are at different times");
  return {state_nu.plus - state_0.plus, state_nu.minus - state_0.minus};
}

}  // namespace alfven
