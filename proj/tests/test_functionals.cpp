#include <doctest.h>

#include <json.hpp>

#include "dynamics.hpp"
#include "errors.hpp"
#include "functionals.hpp"
#include "helpers.hpp"
#include "records.hpp"

using namespace testing;

namespace {

// q(inf) for s = 0.6, sqrt(pi) Gamma(0.1) / (2 Gamma(0.6)), cross-checked with
// oracle::quad_q_infinity.
constexpr double kQInfinity06 = 5.66154348760788;
// q(1) for s = 0.6 from oracle::quad_q (tolerance 1e-13).
constexpr double kQOne06 = 0.860544915290629;

ElsasserState bump(int N, double L, double R, double sharpness, double eps, double nu) {
  InitialDataConfig cfg;
  cfg.support_radius = R;
  cfg.sharpness = sharpness;
  const auto d = make_initial_data(cfg, Grid::make(GridSpec{{N, N}, L, 2.0 / 3.0}));
  ElsasserState s;
  s.plus = d.plus;
  s.minus = d.minus;
  s.epsilon = eps;
  s.nu = nu;
  return s;
}

}  // namespace

TEST_SUITE("functionals") {

TEST_CASE("WeightSpec invariants") {
  CHECK_NOTHROW(WeightSpec::make(0.6, 4));
  CHECK_THROWS_AS(WeightSpec::make(0.5, 4), ConfigError);
  CHECK_THROWS_AS(WeightSpec::make(0.7, 4), ConfigError);
  CHECK_THROWS_AS(WeightSpec::make(0.6, 0), ConfigError);
  const auto spec = WeightSpec::make(0.6, 4);
  CHECK(spec.ghost->spacing() <= 1e-3);
  CHECK(spec.with_order(3).k == 3);
  CHECK(spec.with_order(3).ghost == spec.ghost);
}

TEST_CASE("ghost weight table") {
  const auto spec = WeightSpec::make(0.6, 4);
  CHECK(ghost_q(0.0, spec) == 0.0);
  CHECK(spec.ghost->q_infinity() == doctest::Approx(kQInfinity06).epsilon(1e-13));
  CHECK(std::abs(oracle::quad_q_infinity(0.6) - kQInfinity06) < 1e-10);
  CHECK(std::abs(ghost_q(1.0, spec) - kQOne06) < 1e-12);
  double prev = -1e300;
  for (int i = -400; i <= 400; ++i) {
    const double y = 0.0731 * i;
    const double q = ghost_q(y, spec);
    CHECK(q == -ghost_q(-y, spec));
    CHECK(q > prev);
    CHECK(std::abs(q) <= spec.ghost->q_infinity());
    prev = q;
  }
  for (double y : {0.3, 2.0, 9.99, 15.9995, 16.0, 16.0004, 30.0, 200.0})
    CHECK(std::abs(ghost_q(y, spec) - oracle::quad_q(y, 0.6)) < 1e-8);
  const double wmax = spec.ghost->ghost_weight(1e6);
  CHECK(wmax <= std::exp(spec.ghost->q_infinity()));
  CHECK(spec.ghost->ghost_weight(-1e6) >= std::exp(-spec.ghost->q_infinity()));
}

TEST_CASE("ghost identity holds to second order in the spacing") {
  const double s = 0.6;
  auto err = [&](double h) {
    const GhostTable table(s, h);
    double worst = 0.0;
    for (int sign : {1, -1})
      for (double x1 : {-2.5, -0.4, 0.0, 0.7, 3.1})
        for (double t : {0.0, 0.5, 2.0}) {
          auto w = [&](double x, double tt) { return table.ghost_weight(sign * x - tt); };
          const double lhs = (w(x1, t + h) - w(x1, t - h)) / (2 * h) - sign * (w(x1 + h, t) - w(x1 - h, t)) / (2 * h);
          const double sig = x1 - sign * t;
          worst = std::max(worst, std::abs(lhs + 2.0 * w(x1, t) * std::pow(1.0 + sig * sig, -s)));
        }
    return worst;
  };
  const double order = std::log2(err(1e-3) / err(5e-4));
  CHECK(order > 1.8);
  CHECK(order < 2.2);
}

TEST_CASE("moving weight") {
  for (double p : {0.6, 1.2, -1.2}) CHECK(moving_weight({0, 0, 0}, 2, 0.0, 1, p) == 1.0);
  CHECK(moving_weight({3, 4, 0}, 2, 0.0, 1, 1.0) == doctest::Approx(std::sqrt(26.0)));
  CHECK(moving_weight({1.5, -2, 0}, 2, 0.7, 1, 1.2) == doctest::Approx(moving_weight({2.2, -2, 0}, 2, 0.0, 1, 1.2)));
  CHECK(moving_weight({1.5, -2, 0}, 2, 0.7, -1, 1.2) == doctest::Approx(moving_weight({0.8, -2, 0}, 2, 0.0, 1, 1.2)));
  CHECK(window_valid(9.0, 4.0, 16.0));
  CHECK_FALSE(window_valid(12.0, 4.0, 16.0));
}

TEST_CASE("functionals of the zero state") {
  const auto spec = WeightSpec::make(0.6, 4);
  ElsasserState z;
  z.plus = SpectralVectorField(grid2(32, 8.0), 2);
  z.minus = z.plus;
  z.nu = 0.1;
  CHECK(energy_Ek(z, spec) == 0.0);
  CHECK(weighted_Wk(z, spec) == 0.0);
  CHECK(dissipation_Dk(z, spec) == 0.0);
  const auto [dp, dm] = decay_diagnostic(z, spec);
  CHECK(dp == 0.0);
  CHECK(dm == 0.0);
  CHECK(ball_sup(z, 4.0) == 0.0);
  const auto r = error_functionals(z.plus, z.minus, 1.0, 0.1, spec, {});
  CHECK(r.E == 0.0);
  CHECK(r.order == 3);
  CHECK_THROWS_AS(error_functionals(z.plus, z.minus, 1.0, 0.1, WeightSpec::make(0.6, 1), {}), ConfigError);
}

TEST_CASE("functionals against the direct-sum oracle") {
  const auto spec = WeightSpec::make(0.6, 4);
  auto s = smooth_state(32, 4.0, 0.3, 0.5);
  s.t_star = 0.7;
  const auto r = measure(s, spec, {});
  const oracle::Box box{2, 32, 4.0};
  const auto d = oracle::direct_functional(box, to_oracle(s.plus), to_oracle(s.minus), 0.7, 0.6, 4, 0.5,
                                           oracle::DerivativeMode::direct_dft);
  CHECK(std::abs(r.E / d.E - 1.0) < 1e-10);
  CHECK(std::abs(r.W / d.W - 1.0) < 1e-10);
  CHECK(std::abs(r.D / d.D - 1.0) < 1e-10);
  CHECK(std::abs(r.e_inverse / d.e_inverse - 1.0) < 1e-10);
  CHECK(std::abs(r.e_zeroth / d.e_zeroth - 1.0) < 1e-10);
  CHECK(r.E == doctest::Approx(energy_Ek(s, spec)).epsilon(1e-14));
  CHECK(r.W == doctest::Approx(weighted_Wk(s, spec)).epsilon(1e-14));
  CHECK(r.D == doctest::Approx(dissipation_Dk(s, spec)).epsilon(1e-14));
}

TEST_CASE("report structure") {
  const auto spec = WeightSpec::make(0.6, 4);
  auto s = bump(64, 16.0, 4.0, 1.0, 0.2, 0.0);
  const auto r = measure(s, spec, {});
  CHECK(r.E == doctest::Approx(initial_energy(s.plus, s.minus, spec, 0.0)).epsilon(1e-12));
  CHECK(r.W <= r.E);
  CHECK(r.e_inverse == 0.0);
  CHECK(r.inverse_monitor > 0.0);
  REQUIRE(r.e_blocks.size() == 4);
  double sum = r.e_zeroth;
  for (double b : r.e_blocks) sum += b;
  CHECK(sum == doctest::Approx(r.E).epsilon(1e-13));
  REQUIRE(r.sobolev.size() == 5);
  CHECK(r.sobolev[0] * r.sobolev[0] == doctest::Approx(norm_squared(s.plus) + norm_squared(s.minus)));
  for (std::size_t j = 1; j < r.sobolev.size(); ++j) CHECK(r.sobolev[j] >= r.sobolev[j - 1]);

  const auto cols = report_columns(4);
  const auto row = report_csv_row(r);
  CHECK(static_cast<std::size_t>(std::count(row.begin(), row.end(), ',')) + 1 == cols.size());
  CHECK(report_csv_header(4).rfind("t_star,E_k,W_k,D_k", 0) == 0);
  const auto j = report_to_json(r);
  CHECK(j.size() == cols.size());
  for (const auto& c : cols) CHECK(j.contains(c));
}

TEST_CASE("multi indices and Sobolev norms") {
  CHECK(multi_indices(2, 0).size() == 1);
  CHECK(multi_indices(2, 2).size() == 3);
  CHECK(multi_indices(3, 2).size() == 6);
  CHECK(multi_indices(3, 4).size() == 15);
  const double L = 4.0;
  const auto g = grid2(16, L);
  const double k = std::numbers::pi / L;
  const auto f = from_samples(g, 1, [&](int, const std::array<double, 3>& x) { return std::cos(k * x[0]); });
  const double n0 = norm_squared(f);
  CHECK(sobolev_norm_squared(f, 0) == doctest::Approx(n0));
  CHECK(sobolev_norm_squared(f, 2) == doctest::Approx(n0 * (1 + k * k + k * k * k * k)));
}

TEST_CASE("decay diagnostic is invariant under exact linear transport") {
  const auto spec = WeightSpec::make(0.6, 4);
  auto s = bump(64, 16.0, 3.0, 8.0, 0.2, 0.0);
  const auto [p0, m0] = decay_diagnostic(s, spec);
  for (int m : {4, 12, 20}) {
    ElsasserState l = s;
    l.t_star = m * s.grid()->dx();
    std::tie(l.plus, l.minus) = linear_evolve(s.plus, s.minus, l.t_star, 0.2, 0.0);
    const auto [p, q] = decay_diagnostic(l, spec);
    CHECK(std::abs(p - p0) < 1e-10);
    CHECK(std::abs(q - m0) < 1e-10);
  }
}

TEST_CASE("ball supremum after exact transport of compact samples") {
  // compactly supported samples (not projected), shifted by whole cells
  const auto g = grid2(64, 16.0);
  const double R = 3.0;
  const auto f = from_samples(g, 2, [&](int c, const std::array<double, 3>& x) {
    const double u = (x[0] * x[0] + x[1] * x[1]) / (R * R);
    return u < 1.0 ? (c + 1.0) * std::exp(1.0 - 1.0 / (1.0 - u)) : 0.0;
  });
  CHECK(ball_sup(f, R) > 0.5);
  const int m = static_cast<int>(std::ceil(2 * R / g->dx())) + 1;
  const auto [lp, lm] = linear_evolve(f, f, m * g->dx(), 0.3, 0.0);
  CHECK(ball_sup(lp, R) < 1e-12);
  CHECK(ball_sup(lm, R) < 1e-12);
}

}  // TEST_SUITE
