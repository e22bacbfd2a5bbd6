#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <random>

#include "dynamics.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "functionals.hpp"
#include "oracle.hpp"
#include "records.hpp"

namespace alfven {

namespace {

// Pinned tolerances, one block per criterion.
constexpr int kStructureSteps = 1000;
constexpr double kStructureEpsilon = 0.2;
constexpr double kStructureDivergence = 1e-10;
constexpr double kStructureDrift = 1e-6;
constexpr double kStructureSeconds = 120.0;

constexpr double kShiftTol = 1e-12;
constexpr double kGroupTol = 1e-13;

constexpr int kProjectionStates = 10;
constexpr int kProjectionN = 64;
constexpr double kProjectionTol = 1e-11;

constexpr double kInteractionMinExponent = 0.8;
constexpr double kInteractionMinR2 = 0.98;

constexpr double kBallMinExponent = 0.45;
constexpr double kBallMinR2 = 0.95;
constexpr double kBallLinearOverA = 1e-12;

constexpr int kDecayMinSamples = 50;
constexpr double kDecayMaxRatio = 5.0;
constexpr double kDecayBoundFactor = 10.0;

constexpr double kNuExponent = 1.0;
constexpr double kNuExponentBand = 0.15;
constexpr double kNuMinR2 = 0.98;

constexpr double kUniformityMaxSpread = 10.0;

constexpr double kFdMinOrder = 1.8;
constexpr double kFunctionalRelTol = 1e-10;
constexpr double kGhostTableTol = 1e-8;
constexpr int kGhostSamples = 100;

constexpr double kIdentityCoarse = 1e-3;
constexpr double kIdentityFine = 5e-4;
constexpr double kIdentityMinOrder = 1.8;
constexpr double kIdentityMaxOrder = 2.2;
constexpr double kIdentityFineTol = 1e-5;

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string sci(double v) { return fmt("%.3g", v); }

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Divergence-free state with a smooth random stream function per field.
ElsasserState random_state(const GridPtr& grid, std::mt19937_64& rng, double eps, double nu) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = grid->ndim();
  auto field = [&] {
    SpectralVectorField v(grid, n);
    for (int c = 0; c < n; ++c)
      for (std::size_t i = 0; i < grid->spectral_size(); ++i) {
        const double env = std::exp(-0.5 * grid->k2(i));
        v[c][i] = env * Complex(gauss(rng), gauss(rng));
      }
    for (int c = 0; c < n; ++c) v[c][0] = 0.0;
    // round trip through physical space enforces the real-field symmetry
    return leray_project(transform_to_spectral(transform_to_physical(v)));
  };
  ElsasserState s;
  s.plus = field();
  s.minus = field();
  s.epsilon = eps;
  s.nu = nu;
  return s;
}

double max_sample_difference(const PhysicalField& a, const PhysicalField& b) {
  double worst = 0.0;
  for (int c = 0; c < a.components(); ++c)
    for (std::size_t p = 0; p < a.comps[c].size(); ++p) worst = std::max(worst, std::abs(a.comps[c][p] - b.comps[c][p]));
  return worst;
}

// Samples shifted by m points along axis 0: out(i0) = in(i0 + m).
PhysicalField shift_axis0(const PhysicalField& in, int m) {
  PhysicalField out(in.grid, in.components());
  const int N = in.grid->spec().dims[0];
  const std::size_t stride = in.grid->physical_size() / N;
  for (int c = 0; c < in.components(); ++c)
    for (std::size_t p = 0; p < in.grid->physical_size(); ++p) {
      const int i0 = static_cast<int>(p / stride);
      const int j0 = ((i0 + m) % N + N) % N;
      out.comps[c][p] = in.comps[c][j0 * stride + p % stride];
    }
  return out;
}

CriterionResult structure_preservation(const RunConfig& cfg) {
  CriterionResult r;
  const auto t0 = Clock::now();
  const auto grid = Grid::make(cfg.grid);
  const auto data = make_initial_data(cfg.init, grid);
  ElsasserState s;
  s.plus = data.plus;
  s.minus = data.minus;
  s.epsilon = kStructureEpsilon;
  s.nu = 0.0;
  const double p0 = norm_squared(s.plus), m0 = norm_squared(s.minus);
  for (int i = 0; i < kStructureSteps; ++i) s = step_rk4(s, cfg.dt, cfg.scheme);
  const double div = std::max(max_abs_divergence(s.plus), max_abs_divergence(s.minus));
  const double drift =
      std::max(std::abs(norm_squared(s.plus) / p0 - 1.0), std::abs(norm_squared(s.minus) / m0 - 1.0));
  const double secs = seconds_since(t0);
  r.passed = div < kStructureDivergence && drift < kStructureDrift && secs < kStructureSeconds;
  r.detail = "steps=" + std::to_string(kStructureSteps) + " max_div=" + sci(div) + " (<" + sci(kStructureDivergence) +
             ") drift=" + sci(drift) + " (<" + sci(kStructureDrift) + ") time=" + fmt("%.1f", secs) + "s (<" +
             fmt("%.0f", kStructureSeconds) + "s)";
  return r;
}

CriterionResult linear_exactness(const RunConfig& cfg) {
  CriterionResult r;
  const auto grid = Grid::make(cfg.grid);
  const auto data = make_initial_data(cfg.init, grid);
  const auto p0 = transform_to_physical(data.plus);
  const auto m0 = transform_to_physical(data.minus);
  double shift_err = 0.0;
  for (int m : {1, 7, 36}) {
    const double t = m * grid->dx();
    const auto [lp, lm] = linear_evolve(data.plus, data.minus, t, 1.0, 0.0);
    // plus travels towards -x1, minus towards +x1
    shift_err = std::max(shift_err, max_sample_difference(transform_to_physical(lp), shift_axis0(p0, m)));
    shift_err = std::max(shift_err, max_sample_difference(transform_to_physical(lm), shift_axis0(m0, -m)));
  }
  double group_err = 0.0;
  for (double nu : {0.0, 0.1}) {
    const double eps = 0.2;
    const double t1 = 1.37, t2 = 2.91;
    const auto [a1, b1] = linear_evolve(data.plus, data.minus, t1, eps, nu);
    const auto [a2, b2] = linear_evolve(a1, b1, t2, eps, nu);
    const auto [a, b] = linear_evolve(data.plus, data.minus, t1 + t2, eps, nu);
    group_err = std::max({group_err, max_coefficient_difference(a2, a), max_coefficient_difference(b2, b)});
  }
  r.passed = shift_err <= kShiftTol && group_err <= kGroupTol;
  r.detail = "shift_err=" + sci(shift_err) + " (<=" + sci(kShiftTol) + ") group_err=" + sci(group_err) + " (<=" +
             sci(kGroupTol) + ")";
  return r;
}

CriterionResult projection_identity(const RunConfig& cfg) {
  CriterionResult r;
  GridSpec spec = cfg.grid;
  for (auto& d : spec.dims) d = kProjectionN;
  const auto grid = Grid::make(spec);
  std::mt19937_64 rng(cfg.init.seed + 20250417);
  double worst = 0.0;
  for (int i = 0; i < kProjectionStates; ++i) {
    const double eps = 0.05 + 0.1 * i;
    const double nu = (i % 2) ? 0.3 : 0.0;
    const auto s = random_state(grid, rng, eps, nu);
    const auto t = nonlinear_rhs(s);
    auto plain = [&](const SpectralVectorField& self, const SpectralVectorField& other, double sign) {
      auto out = partial_derivative(self, 0, 1);
      out *= sign;
      out.axpy(-eps, advect(other, self));
      out.axpy(eps * nu, laplacian(self));
      return out;
    };
    const auto pp = leray_project(plain(s.plus, s.minus, 1.0));
    const auto pm = leray_project(plain(s.minus, s.plus, -1.0));
    worst = std::max({worst, max_coefficient_difference(t.rhs_plus, pp), max_coefficient_difference(t.rhs_minus, pm)});
  }
  r.passed = worst <= kProjectionTol;
  r.detail = "states=" + std::to_string(kProjectionStates) + " grid=" + std::to_string(kProjectionN) +
             " max_diff=" + sci(worst) + " (<=" + sci(kProjectionTol) + ")";
  return r;
}

std::string fit_text(const SweepResult& s) {
  if (!s.fit) return "no fit: " + s.diagnostic;
  return "exponent=" + fmt("%.4f", s.fit->exponent) + " r2=" + fmt("%.5f", s.fit->r_squared);
}

CriterionResult interaction_scaling(const SweepResult& s) {
  CriterionResult r;
  r.passed = s.fit && s.fit->exponent >= kInteractionMinExponent && s.fit->r_squared > kInteractionMinR2;
  r.detail = fit_text(s) + " (need >=" + fmt("%.2f", kInteractionMinExponent) + ", r2>" +
             fmt("%.2f", kInteractionMinR2) + ")";
  return r;
}

CriterionResult ball_decay(const SweepResult& s) {
  CriterionResult r;
  const double lin = s.metrics.count("max_linear_ball_sup_over_A") ? s.metrics.at("max_linear_ball_sup_over_A") : -1.0;
  const bool fit_ok = s.fit && s.fit->exponent >= kBallMinExponent && s.fit->r_squared > kBallMinR2;
  const bool lin_ok = lin >= 0.0 && lin < kBallLinearOverA;
  r.passed = fit_ok && lin_ok;
  r.detail = fit_text(s) + " (need >=" + fmt("%.2f", kBallMinExponent) + ", r2>" + fmt("%.2f", kBallMinR2) +
             ") linear_ball_sup/A=" + sci(lin) + " (<" + sci(kBallLinearOverA) + ")";
  return r;
}

CriterionResult weighted_decay(const SweepRecord& rec) {
  CriterionResult r;
  const double bound = kDecayBoundFactor * std::sqrt(rec.E0);
  const double hi = std::max(rec.decay_max_plus, rec.decay_max_minus);
  const double ratio_p = rec.decay_min_plus > 0.0 ? rec.decay_max_plus / rec.decay_min_plus : INFINITY;
  const double ratio_m = rec.decay_min_minus > 0.0 ? rec.decay_max_minus / rec.decay_min_minus : INFINITY;
  const double ratio = std::max(ratio_p, ratio_m);
  r.passed = !rec.diverged && rec.valid_samples >= kDecayMinSamples && ratio <= kDecayMaxRatio && hi <= bound;
  r.detail = "eps=" + fmt("%g", rec.epsilon) + " samples=" + std::to_string(rec.valid_samples) + " (>=" +
             std::to_string(kDecayMinSamples) + ") max/min=" + fmt("%.3f", ratio) + " (<=" +
             fmt("%.0f", kDecayMaxRatio) + ") max=" + sci(hi) + " (<=" + sci(bound) + ")";
  return r;
}

CriterionResult nu_limit(const SweepResult& s) {
  CriterionResult r;
  r.passed = s.fit && std::abs(s.fit->exponent - kNuExponent) <= kNuExponentBand && s.fit->r_squared > kNuMinR2;
  r.detail = fit_text(s) + " (need " + fmt("%.2f", kNuExponent) + "+-" + fmt("%.2f", kNuExponentBand) + ", r2>" +
             fmt("%.2f", kNuMinR2) + ")";
  return r;
}

CriterionResult uniformity(const SweepResult& s) {
  CriterionResult r;
  auto metric = [&](const char* k) { return s.metrics.count(k) ? s.metrics.at(k) : -1.0; };
  const double spread = metric("ratio_spread");
  const double div = metric("diverged_runs");
  const double big = metric("large_data_diverged_runs");
  bool complete = !s.extra_records.empty();
  for (const auto& rec : s.extra_records) complete = complete && !rec.diverged;
  r.passed = spread > 0.0 && spread <= kUniformityMaxSpread && div == 0.0 && big == 0.0 && complete;
  r.detail = "ratio_spread=" + fmt("%.3f", spread) + " (<=" + fmt("%.0f", kUniformityMaxSpread) +
             ") diverged=" + fmt("%.0f", div) + " large_data_runs=" + std::to_string(s.extra_records.size()) +
             " large_data_diverged=" + fmt("%.0f", big);
  if (!s.diagnostic.empty()) r.detail += " [" + s.diagnostic + "]";
  return r;
}

// Fields of the smooth FD fixture on [-L, L)^2: perpendicular gradients of
// low-mode stream functions.
ElsasserState smooth_fixture(int N, double L, double eps, double nu) {
  const auto grid = Grid::make(GridSpec{{N, N}, L, 2.0 / 3.0});
  PhysicalField pp(grid, 1), pm(grid, 1);
  const double k = std::acos(-1.0) / L;
  for (std::size_t q = 0; q < grid->physical_size(); ++q) {
    const double x = grid->coordinate(q, 0), y = grid->coordinate(q, 1);
    pp.comps[0][q] = std::sin(k * x) * std::cos(k * y) + 0.3 * std::cos(k * x + k * y);
    pm.comps[0][q] = std::cos(k * x) * std::sin(k * y) - 0.2 * std::sin(k * x - k * y);
  }
  auto perp = [&](const SpectralVectorField& psi) {
    SpectralVectorField v(grid, 2);
    const auto g = gradient(psi);
    v[0] = g[1];
    for (auto& z : v[0]) z = -z;
    v[1] = g[0];
    return v;
  };
  ElsasserState s;
  s.plus = perp(transform_to_spectral(pp));
  s.minus = perp(transform_to_spectral(pm));
  s.epsilon = eps;
  s.nu = nu;
  return s;
}

oracle::Field to_oracle(const SpectralVectorField& f) {
  const auto p = transform_to_physical(f);
  oracle::Field out;
  for (const auto& c : p.comps) out.emplace_back(c.begin(), c.end());
  return out;
}

CriterionResult oracle_equivalence(const RunConfig& cfg) {
  CriterionResult r;
  // FD vs spectral tendency under dx halving
  const double L = 4.0, eps = 0.5, nu = 0.2;
  double errs[2];
  const int Ns[2] = {16, 32};
  for (int i = 0; i < 2; ++i) {
    const auto s = smooth_fixture(Ns[i], L, eps, nu);
    const auto t = nonlinear_rhs(s);
    const oracle::Box box{2, Ns[i], L};
    const auto fd = oracle::fd_rhs(box, to_oracle(s.plus), to_oracle(s.minus), eps, nu);
    const auto sp = to_oracle(t.rhs_plus), sm = to_oracle(t.rhs_minus);
    double e = 0.0;
    for (int c = 0; c < 2; ++c)
      for (std::size_t q = 0; q < sp[c].size(); ++q)
        e = std::max({e, std::abs(sp[c][q] - fd.plus[c][q]), std::abs(sm[c][q] - fd.minus[c][q])});
    errs[i] = e;
  }
  const double order = std::log2(errs[0] / errs[1]);

  // functionals vs direct sums on 32^2: smooth fixture and the configured bump
  double frel = 0.0;
  const auto spec = WeightSpec::make(cfg.s, cfg.k);
  auto compare = [&](const ElsasserState& st, double Lbox, double nu_f) {
    const auto rep = measure(st, spec, {});
    const oracle::Box box{2, 32, Lbox};
    const auto d = oracle::direct_functional(box, to_oracle(st.plus), to_oracle(st.minus), st.t_star, cfg.s, cfg.k,
                                             nu_f, oracle::DerivativeMode::direct_dft);
    frel = std::max({frel, std::abs(rep.E / d.E - 1.0), std::abs(rep.W / d.W - 1.0), std::abs(rep.D / d.D - 1.0)});
  };
  {
    auto st = smooth_fixture(32, L, 0.3, 0.5);
    st.t_star = 0.7;
    compare(st, L, 0.5);
  }
  {
    GridSpec g{{32, 32}, 16.0, 2.0 / 3.0};
    InitialDataConfig init;
    init.sharpness = 1.0;
    const auto grid = Grid::make(g);
    const auto data = make_initial_data(init, grid);
    ElsasserState st;
    st.plus = data.plus;
    st.minus = data.minus;
    st.epsilon = 0.2;
    st.nu = 0.0;
    st.t_star = 1.5;
    compare(st, 16.0, 0.0);
  }

  // ghost table vs adaptive quadrature
  double gerr = 0.0;
  for (int i = 0; i < kGhostSamples; ++i) {
    const double y = -20.0 + 40.0 * (i + 0.5) / kGhostSamples;
    gerr = std::max(gerr, std::abs(ghost_q(y, spec) - oracle::quad_q(y, cfg.s)));
  }
  r.passed = order >= kFdMinOrder && frel <= kFunctionalRelTol && gerr <= kGhostTableTol;
  r.detail = "fd_order=" + fmt("%.3f", order) + " (>=" + fmt("%.1f", kFdMinOrder) + ") functional_rel=" + sci(frel) +
             " (<=" + sci(kFunctionalRelTol) + ") ghost_err=" + sci(gerr) + " (<=" + sci(kGhostTableTol) + ")";
  return r;
}

// max |(d_t -+ d_1) e^{q(sigma)} + 2 e^q <x1 -+ t>^{-2s}| with centred differences of step h
double identity_error(double s, double h) {
  const GhostTable table(s, h);
  double worst = 0.0;
  for (int sign : {1, -1}) {
    for (int ix = -40; ix <= 40; ix += 7) {
      for (int it = 0; it <= 6; ++it) {
        const double x1 = ix * 0.1, t = it * 0.5;
        auto w = [&](double x, double tt) { return table.ghost_weight(sign * x - tt); };
        const double dt = (w(x1, t + h) - w(x1, t - h)) / (2.0 * h);
        const double d1 = (w(x1 + h, t) - w(x1 - h, t)) / (2.0 * h);
        const double lhs = dt - sign * d1;
        const double sig = x1 - sign * t;
        const double rhs = -2.0 * w(x1, t) * std::pow(1.0 + sig * sig, -s);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  return worst;
}

CriterionResult ghost_identity(const RunConfig& cfg) {
  CriterionResult r;
  const double coarse = identity_error(cfg.s, kIdentityCoarse);
  const double fine = identity_error(cfg.s, kIdentityFine);
  const double order = std::log2(coarse / fine);
  r.passed = order >= kIdentityMinOrder && order <= kIdentityMaxOrder && fine < kIdentityFineTol;
  r.detail = "err(" + sci(kIdentityCoarse) + ")=" + sci(coarse) + " err(" + sci(kIdentityFine) + ")=" + sci(fine) +
             " (<" + sci(kIdentityFineTol) + ") order=" + fmt("%.3f", order) + " (in [" +
             fmt("%.1f", kIdentityMinOrder) + ", " + fmt("%.1f", kIdentityMaxOrder) + "])";
  return r;
}

CriterionResult failed(int id, const std::string& name, const std::exception& e) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.passed = false;
  r.detail = std::string("error: ") + e.what();
  return r;
}

const char* criterion_name(int id) {
  static const char* names[] = {"",
                                "structure_preservation",
                                "linear_propagator",
                                "pressure_projection",
                                "interaction_scaling",
                                "compact_support_decay",
                                "weighted_decay",
                                "nondissipative_limit",
                                "uniform_bound",
                                "oracle_equivalence",
                                "ghost_identity"};
  return names[id];
}

}  // namespace

std::string format_criterion(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "%s %2d %-24s ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
  char tail[32];
  std::snprintf(tail, sizeof tail, "  (%.1f s)", r.seconds);
  return head + r.detail + tail;
}

std::vector<CriterionResult> run_acceptance(const RunConfig& cfg, const AcceptanceOptions& opts) {
  cfg.validate();
  std::vector<int> ids = opts.only;
  if (ids.empty())
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (int id : ids)
    if (id < 1 || id > kCriterionCount) throw UsageError("unknown acceptance criterion " + std::to_string(id));

  std::optional<SweepResult> interaction;
  auto keep = [&](const SweepResult& s) {
    if (!opts.out_dir.empty()) write_sweep_outputs(opts.out_dir, s);
  };
  auto get_interaction = [&]() -> const SweepResult& {
    if (!interaction) {
      interaction = sweep_interaction_vanishing(cfg, opts.threads);
      keep(*interaction);
    }
    return *interaction;
  };

  std::vector<CriterionResult> results;
  for (int id : ids) {
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
      switch (id) {
        case 1: r = structure_preservation(cfg); break;
        case 2: r = linear_exactness(cfg); break;
        case 3: r = projection_identity(cfg); break;
        case 4: r = interaction_scaling(get_interaction()); break;
        case 5: {
          const auto icfg = cfg.with(cfg.interaction);
          const auto bcfg = cfg.with(cfg.ball);
          SweepResult ball;
          if (config_to_json(icfg) == config_to_json(bcfg)) {
            validate_ball_sweep(bcfg);
            ball = fit_ball(get_interaction().records);
            ball.config_hash = config_hash(bcfg);
          } else {
            ball = sweep_ball_decay(cfg, opts.threads);
          }
          keep(ball);
          r = ball_decay(ball);
          break;
        }
        case 6: {
          std::optional<SweepRecord> rec;
          for (const auto& x : get_interaction().records)
            if (x.epsilon == cfg.decay_epsilon && x.nu == 0.0) rec = x;
          if (!rec) {
            auto dcfg = cfg.with(cfg.interaction);
            dcfg.nu_list = {0.0};
            rec = run_single(dcfg, cfg.decay_epsilon, 0.0);
          }
          r = weighted_decay(*rec);
          break;
        }
        case 7: {
          const auto s = sweep_nu_limit(cfg, opts.threads);
          keep(s);
          r = nu_limit(s);
          break;
        }
        case 8: {
          const auto s = sweep_uniformity(cfg, opts.threads);
          keep(s);
          r = uniformity(s);
          break;
        }
        case 9: r = oracle_equivalence(cfg); break;
        case 10: r = ghost_identity(cfg); break;
      }
    } catch (const std::exception& e) {
      r = failed(id, criterion_name(id), e);
    }
    r.id = id;
    r.name = criterion_name(id);
    r.seconds = seconds_since(t0);
    if (opts.on_line) opts.on_line(format_criterion(r));
    results.push_back(r);
  }
  return results;
}

}  // namespace alfven
