#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "checkpoint.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "helpers.hpp"

using namespace testing;

namespace {

ElsasserState bump_state(int N, double L, double R, double eps, double nu, double sharpness = 1.0) {
  InitialDataConfig cfg;
  cfg.support_radius = R;
  cfg.sharpness = sharpness;
  const auto d = make_initial_data(cfg, Grid::make(GridSpec{{N, N}, L, 2.0 / 3.0}));
  ElsasserState s;
  s.plus = d.plus;
  s.minus = d.minus;
  s.epsilon = eps;
  s.nu = nu;
  s.data_hash = data_hash(d.plus, d.minus);
  return s;
}

ElsasserState random_state(const GridPtr& g, std::mt19937_64& rng, double eps, double nu) {
  ElsasserState s;
  s.plus = random_solenoidal(g, rng);
  s.minus = random_solenoidal(g, rng);
  s.epsilon = eps;
  s.nu = nu;
  return s;
}

SpectralVectorField shift_x1(const SpectralVectorField& f, int m) {
  const auto& g = f.grid();
  const auto p = transform_to_physical(f);
  PhysicalField out(g, p.components());
  const int N = g->spec().dims[0];
  const std::size_t stride = g->physical_size() / N;
  for (int c = 0; c < p.components(); ++c)
    for (std::size_t q = 0; q < g->physical_size(); ++q) {
      const int j0 = ((static_cast<int>(q / stride) + m) % N + N) % N;
      out.comps[c][q] = p.comps[c][j0 * stride + q % stride];
    }
  return transform_to_spectral(out);
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("pressure") {
  const auto g = grid2(32, 4.0);
  std::mt19937_64 rng(21);
  const auto s = random_state(g, rng, 0.4, 0.0);
  SpectralVectorField z(g, 2);
  CHECK(max_abs(pressure_solve(s.plus, z, 0.4)) == 0.0);
  CHECK(max_abs(pressure_solve(s.plus, s.minus, 0.0)) == 0.0);
  CHECK(pressure_solve(s.plus, s.minus, 0.4)[0][0] == Complex(0.0, 0.0));
}

TEST_CASE("pressure gradient equals the Leray complement of the tendency") {
  const auto g = grid2(64, 6.0);
  std::mt19937_64 rng(22);
  for (int i = 0; i < 3; ++i) {
    const auto s = random_state(g, rng, 0.3 + 0.2 * i, 0.1 * i);
    const auto t = nonlinear_rhs(s);
    auto plain = [&](const SpectralVectorField& self, const SpectralVectorField& other, double sign) {
      auto out = partial_derivative(self, 0, 1);
      out *= sign;
      out.axpy(-s.epsilon, advect(other, self));
      out.axpy(s.epsilon * s.nu, laplacian(self));
      return out;
    };
    CHECK(max_coefficient_difference(t.rhs_plus, leray_project(plain(s.plus, s.minus, 1.0))) < 1e-11);
    CHECK(max_coefficient_difference(t.rhs_minus, leray_project(plain(s.minus, s.plus, -1.0))) < 1e-11);
    CHECK(max_abs_divergence(t.rhs_plus) < 1e-12);
    CHECK(max_abs_divergence(t.rhs_minus) < 1e-12);
    auto grad_p = gradient(t.pressure);
    CHECK(max_coefficient_difference(plain(s.plus, s.minus, 1.0) - grad_p, t.rhs_plus) < 1e-11);
  }
}

TEST_CASE("tendency special cases") {
  const auto g = grid2(32, 4.0);
  std::mt19937_64 rng(23);
  ElsasserState z;
  z.plus = SpectralVectorField(g, 2);
  z.minus = SpectralVectorField(g, 2);
  z.epsilon = 0.5;
  const auto tz = nonlinear_rhs(z);
  CHECK(max_abs(tz.rhs_plus) == 0.0);
  CHECK(max_abs(tz.rhs_minus) == 0.0);

  auto s = random_state(g, rng, 0.0, 0.7);
  const auto t = nonlinear_rhs(s);
  CHECK(max_coefficient_difference(t.rhs_plus, partial_derivative(s.plus, 0, 1)) == 0.0);
  CHECK(max_coefficient_difference(t.rhs_minus, -1.0 * partial_derivative(s.minus, 0, 1)) == 0.0);

  s.epsilon = 0.5;
  s.plus[0][3] = std::numeric_limits<double>::quiet_NaN();
  s.t_star = 2.5;
  try {
    nonlinear_rhs(s);
    FAIL("expected blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.t_star() == 2.5);
  }
}

TEST_CASE("RK4 transport structure") {
  auto s = bump_state(64, 16.0, 3.0, 0.0, 0.0);
  const double n0 = norm_squared(s.plus);
  // RK4 is not unitary: the drift per step is O((k dt)^6) and this bump has Nyquist-scale content.
  const auto one = step_rk4(s, 0.005);
  CHECK(std::abs(norm_squared(one.plus) / n0 - 1.0) < 1e-13);
  CHECK(one.t_star == doctest::Approx(0.005));

  TimeStepperConfig fwd;
  fwd.dt = 0.01;
  fwd.t_end = 2.0;
  const auto there = evolve(s, fwd);
  TimeStepperConfig back;
  back.dt = 0.01;
  back.t_end = 0.0;
  const auto again = evolve(there, back);
  CHECK(std::abs(again.t_star) < 1e-12);
  // forward then backward RK4 returns up to the O(dt^4) global error
  CHECK(max_coefficient_difference(again.plus, s.plus) < 1e-9);
  CHECK(max_coefficient_difference(again.minus, s.minus) < 1e-9);
}

TEST_CASE("RK4 self-convergence is fourth order") {
  const auto s = bump_state(64, 16.0, 4.0, 0.5, 0.0);
  auto run = [&](double dt) {
    TimeStepperConfig c;
    c.dt = dt;
    c.t_end = 1.0;
    return evolve(s, c);
  };
  const auto a = run(0.1), b = run(0.05), ref = run(0.025);
  const double ea = std::max(max_coefficient_difference(a.plus, ref.plus), max_coefficient_difference(a.minus, ref.minus));
  const double eb = std::max(max_coefficient_difference(b.plus, ref.plus), max_coefficient_difference(b.minus, ref.minus));
  const double ratio = ea / eb;
  MESSAGE("self-convergence ratio " << ratio);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
}

TEST_CASE("Strang transport splitting agrees with plain RK4") {
  const auto s = bump_state(64, 16.0, 4.0, 0.3, 0.1);
  TimeStepperConfig c;
  c.dt = 0.02;
  c.t_end = 1.0;
  const auto a = evolve(s, c);
  c.scheme = Scheme::strang_rk4;
  const auto b = evolve(s, c);
  CHECK(max_coefficient_difference(a.plus, b.plus) < 1e-6);
}

TEST_CASE("CFL contract and blow-up threshold") {
  auto s = bump_state(64, 16.0, 4.0, 0.5, 0.0);
  const double dt = max_stable_dt(s);
  CHECK(dt > 0.0);
  CHECK_NOTHROW(step_rk4(s, dt));
  CHECK_THROWS_AS(step_rk4(s, 1.5 * dt), ConfigError);
  s.nu = 0.9;
  CHECK(max_stable_dt(s) <= 0.25 * s.grid()->dx() * s.grid()->dx() / (s.epsilon * s.nu) + 1e-15);
  s.nu = 0.1;
  CHECK_THROWS_AS(step_rk4(s, -0.01), ConfigError);  // backwards only without dissipation

  auto big = bump_state(32, 16.0, 4.0, 0.1, 0.0);
  big.plus[0][5] = 2e12;
  CHECK(blown_up(big.plus));
  CHECK_THROWS_AS(step_rk4(big, 1e-16), BlowUpError);
}

TEST_CASE("evolve snaps samples to the step grid") {
  const auto s = bump_state(32, 16.0, 4.0, 0.2, 0.0);
  TimeStepperConfig c;
  c.dt = 0.1;
  c.t_end = 1.0;
  c.sample_times = {0.0, 0.33, 0.5, 1.0, 3.0};
  std::vector<double> seen;
  evolve(s, c, [&](const ElsasserState& st) { seen.push_back(st.t_star); });
  REQUIRE(seen.size() == 4);
  CHECK(seen[0] == 0.0);
  CHECK(seen[1] == doctest::Approx(0.3));
  CHECK(seen[2] == doctest::Approx(0.5));
  CHECK(seen[3] == doctest::Approx(1.0));
}

TEST_CASE("linear propagator") {
  const auto s = bump_state(64, 16.0, 3.0, 0.2, 0.0, 8.0);
  const auto& g = s.grid();

  const auto [i0, j0] = linear_evolve(s.plus, s.minus, 0.0, 0.2, 0.3);
  CHECK(max_coefficient_difference(i0, s.plus) == 0.0);
  CHECK(max_coefficient_difference(j0, s.minus) == 0.0);

  for (int m : {1, 5, 12}) {
    const auto [lp, lm] = linear_evolve(s.plus, s.minus, m * g->dx(), 0.2, 0.0);
    CHECK(max_coefficient_difference(lp, shift_x1(s.plus, m)) < 1e-12);
    CHECK(max_coefficient_difference(lm, shift_x1(s.minus, -m)) < 1e-12);
  }

  const double eps = 0.2, nu = 0.3, t = 1.7;
  const auto [lp, lm] = linear_evolve(s.plus, s.minus, t, eps, nu);
  double want = 0.0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < g->spectral_size(); ++i)
      want += g->parseval_weight(i) * std::exp(-2.0 * eps * nu * g->k2(i) * t) * std::norm(s.plus[c][i]);
  want *= std::pow(2.0 * g->half_length(), 2);
  CHECK(std::abs(norm_squared(lp) / want - 1.0) < 1e-12);

  const auto [a1, b1] = linear_evolve(s.plus, s.minus, 0.6, eps, nu);
  const auto [a2, b2] = linear_evolve(a1, b1, 1.1, eps, nu);
  CHECK(max_coefficient_difference(a2, lp) < 1e-13);
  CHECK(max_coefficient_difference(b2, lm) < 1e-13);
}

TEST_CASE("error field") {
  const auto s = bump_state(64, 16.0, 3.0, 0.0, 0.0, 8.0);
  const auto [e0p, e0m] = error_field(s, s.plus, s.minus, 0.0);
  CHECK(max_abs(e0p) == 0.0);
  CHECK(max_abs(e0m) == 0.0);
  CHECK_THROWS_AS(error_field(s, s.plus, s.minus, 0.5), UsageError);

  // eps = 0: the systems coincide
  TimeStepperConfig c;
  c.dt = 0.01;
  c.t_end = 1.0;
  const auto end = evolve(s, c);
  const auto [lp, lm] = linear_evolve(s.plus, s.minus, end.t_star, 0.0, 0.0);
  const auto [ep, em] = error_field(end, lp, lm, end.t_star);
  CHECK(max_abs(ep) < 1e-10);
  CHECK(max_abs(em) < 1e-10);
}

TEST_CASE("nu difference") {
  auto a = bump_state(32, 16.0, 4.0, 0.2, 0.0);
  auto b = a;
  const auto [z1, z2] = nu_difference(a, b);
  CHECK(max_abs(z1) == 0.0);
  CHECK(max_abs(z2) == 0.0);
  b.epsilon = 0.3;
  CHECK_THROWS_AS(nu_difference(a, b), UsageError);
  b = a;
  b.data_hash ^= 1;
  CHECK_THROWS_AS(nu_difference(a, b), UsageError);
  b = a;
  b.t_star = 1.0;
  CHECK_THROWS_AS(nu_difference(a, b), UsageError);
}

TEST_CASE("swap symmetry with x1 reflection") {
  InitialDataConfig cfg;
  cfg.support_radius = 2.5;
  cfg.sharpness = 1.0;
  cfg.center_plus = {1.0, 0.5, 0.0};
  cfg.center_minus = {-0.5, -1.0, 0.0};
  const auto d = make_initial_data(cfg, Grid::make(GridSpec{{64, 64}, 16.0, 2.0 / 3.0}));
  ElsasserState a;
  a.plus = d.plus;
  a.minus = d.minus;
  a.epsilon = 0.5;
  a.nu = 0.2;
  ElsasserState b = a;
  b.plus = reflect_x1(a.minus);
  b.minus = reflect_x1(a.plus);
  TimeStepperConfig c;
  c.dt = 0.05;
  c.t_end = 2.0;
  const auto ea = evolve(a, c);
  const auto eb = evolve(b, c);
  CHECK(max_coefficient_difference(reflect_x1(eb.minus), ea.plus) < 1e-12);
  CHECK(max_coefficient_difference(reflect_x1(eb.plus), ea.minus) < 1e-12);
}

TEST_CASE("checkpoint round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "alfvenlab_ckpt_test";
  std::filesystem::create_directories(dir);
  auto s = bump_state(32, 16.0, 4.0, 0.2, 0.1);
  s.t_star = 1.25;
  const auto path = (dir / "a.ckpt").string();
  write_checkpoint(path, s, 0.6, 4);
  const auto ck = read_checkpoint(path);
  CHECK(ck.header.grid == s.grid()->spec());
  CHECK(ck.header.epsilon == 0.2);
  CHECK(ck.header.nu == 0.1);
  CHECK(ck.header.s == 0.6);
  CHECK(ck.header.k == 4);
  CHECK(ck.header.t_star == 1.25);
  CHECK(ck.header.data_hash == s.data_hash);
  CHECK(max_coefficient_difference(ck.state.plus, s.plus) == 0.0);
  CHECK(max_coefficient_difference(ck.state.minus, s.minus) == 0.0);

  const auto p64 = (dir / "b.ckpt").string();
  write_checkpoint(p64, s, 0.6, 4, Precision::complex64);
  const auto c64 = read_checkpoint(p64);
  CHECK(max_coefficient_difference(c64.state.plus, s.plus) < 1e-6 * max_abs(s.plus));

  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-3, std::ios::end);
    f.put('\x7f');
  }
  CHECK_THROWS_AS(read_checkpoint(path), IoError);
  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << "NOTACKPT";
  }
  CHECK_THROWS_AS(read_checkpoint(path), IoError);
  CHECK_THROWS_AS(read_checkpoint((dir / "missing.ckpt").string()), IoError);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
