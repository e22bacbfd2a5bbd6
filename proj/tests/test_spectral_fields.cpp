#include <doctest.h>

#include "errors.hpp"
#include "helpers.hpp"

using namespace testing;

TEST_SUITE("spectral_fields") {

TEST_CASE("grid spec invariants") {
  CHECK_NOTHROW(GridSpec{}.validate());
  CHECK_THROWS_AS((GridSpec{{6, 6}, 1.0, 2.0 / 3.0}.validate()), ConfigError);   // below 8
  CHECK_THROWS_AS((GridSpec{{9, 9}, 1.0, 2.0 / 3.0}.validate()), ConfigError);   // odd
  CHECK_THROWS_AS((GridSpec{{16, 32}, 1.0, 2.0 / 3.0}.validate()), ConfigError);  // non-square
  CHECK_THROWS_AS((GridSpec{{16, 16}, 0.0, 2.0 / 3.0}.validate()), ConfigError);
  CHECK_THROWS_AS((GridSpec{{16, 16}, 1.0, 1.5}.validate()), ConfigError);
  CHECK_THROWS_AS((GridSpec{{16}, 1.0, 2.0 / 3.0}.validate()), ConfigError);
  const auto g = grid2(16, 2.0);
  CHECK(g->k0() == doctest::Approx(std::numbers::pi / 2.0));
  for (std::size_t i = 0; i < g->spectral_size(); ++i)
    CHECK(g->wavenumber(i, 0) == doctest::Approx(g->k0() * g->wave_index(i, 0)));
}

TEST_CASE("single mode round trip and derivative") {
  const double L = 3.0;
  const auto g = grid2(16, L);
  const double k = std::numbers::pi / L;
  const auto f = from_samples(g, 1, [&](int, const std::array<double, 3>& x) { return std::cos(k * x[0]); });
  const auto back = transform_to_spectral(transform_to_physical(f));
  CHECK(max_coefficient_difference(f, back) < 1e-12);

  const auto d1 = partial_derivative(f, 0, 1);
  const auto want = from_samples(g, 1, [&](int, const std::array<double, 3>& x) { return -k * std::sin(k * x[0]); });
  CHECK(max_coefficient_difference(d1, want) < 1e-13);
  // constant in x2
  CHECK(max_abs(partial_derivative(f, 1, 1)) == 0.0);
  CHECK(max_abs(partial_derivative(f, 1, 3)) == 0.0);
}

TEST_CASE("zero field round trip") {
  const auto g = grid2(16, 1.0);
  SpectralVectorField z(g, 2);
  CHECK(max_abs(transform_to_spectral(transform_to_physical(z))) == 0.0);
}

TEST_CASE("fast transform matches direct DFT sum on 32^2") {
  const auto g = grid2(32, 5.0);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  PhysicalField p(g, 1);
  for (auto& v : p.comps[0]) v = gauss(rng);
  const auto f = transform_to_spectral(p);
  const oracle::Box box{2, 32, 5.0};
  const auto direct = oracle::direct_forward(box, oracle::Samples(p.comps[0].begin(), p.comps[0].end()));
  double worst = 0.0;
  for (std::size_t i = 0; i < g->spectral_size(); ++i)
    worst = std::max(worst, std::abs(f[0][i] - direct.c[oracle_index(*g, i)]));
  CHECK(worst < 1e-12);
  const auto back = transform_to_physical(f);
  double rt = 0.0;
  for (std::size_t q = 0; q < g->physical_size(); ++q) rt = std::max(rt, std::abs(back.comps[0][q] - p.comps[0][q]));
  CHECK(rt < 1e-12);
}

TEST_CASE("Parseval convention") {
  const auto g = grid2(32, 4.0);
  std::mt19937_64 rng(3);
  const auto f = random_field(g, 2, rng);
  const auto h = random_field(g, 2, rng);
  const auto pf = transform_to_physical(f), ph = transform_to_physical(h);
  double direct = 0.0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t q = 0; q < g->physical_size(); ++q) direct += pf.comps[c][q] * ph.comps[c][q];
  direct *= g->cell_volume();
  CHECK(inner_product(f, h) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("derivative of a sampled Gaussian against centred differences") {
  const double L = 32.0;
  const auto g = grid2(128, L);  // dx = 0.5
  const double w = 4.0;
  auto gauss = [&](double x, double y) { return std::exp(-(x * x + y * y) / (2.0 * w * w)); };
  const auto f = from_samples(g, 1, [&](int, const std::array<double, 3>& x) { return gauss(x[0], x[1]); });
  const auto d = transform_to_physical(partial_derivative(f, 0, 1));
  const double dx = g->dx();
  double worst = 0.0;
  for (std::size_t q = 0; q < g->physical_size(); ++q) {
    const double x = g->coordinate(q, 0), y = g->coordinate(q, 1);
    const double fd = (gauss(x + dx, y) - gauss(x - dx, y)) / (2.0 * dx);
    worst = std::max(worst, std::abs(d.comps[0][q] - fd));
  }
  CHECK(worst < 5e-3);
}

TEST_CASE("Leray projection") {
  const auto g = grid2(32, 4.0);
  std::mt19937_64 rng(11);

  SUBCASE("single mode forced by the projector") {
    SpectralVectorField f(g, 2);
    const long i = find_mode(*g, {1, 0, 0});
    REQUIRE(i >= 0);
    f[0][i] = 1.0;
    f[1][i] = 1.0;
    const auto p = leray_project(f);
    CHECK(std::abs(p[0][i]) < 1e-15);
    CHECK(std::abs(p[1][i] - Complex(1.0, 0.0)) < 1e-15);
  }
  SUBCASE("gradients are annihilated") {
    const auto phi = random_field(g, 1, rng, 0.3);
    CHECK(max_abs(leray_project(gradient(phi))) < 1e-14);
  }
  SUBCASE("idempotent, orthogonal, divergence free") {
    const auto f = random_field(g, 2, rng);
    const auto p = leray_project(f);
    CHECK(max_coefficient_difference(leray_project(p), p) < 1e-14);
    CHECK(std::abs(inner_product(f - p, p)) < 1e-12 * norm_squared(f));
    CHECK(max_abs_divergence(p) < 1e-14);
  }
  SUBCASE("commutes with d1") {
    const auto f = random_field(g, 2, rng);
    CHECK(max_coefficient_difference(partial_derivative(leray_project(f), 0, 1),
                                     leray_project(partial_derivative(f, 0, 1))) < 1e-13);
  }
  SUBCASE("three dimensions") {
    const auto g3 = Grid::make(GridSpec{{8, 8, 8}, 2.0, 2.0 / 3.0});
    const auto f = random_field(g3, 3, rng);
    const auto p = leray_project(f);
    CHECK(max_abs_divergence(p) < 1e-13);
    CHECK(max_coefficient_difference(leray_project(p), p) < 1e-14);
  }
}

TEST_CASE("inverse modulus gradient") {
  const double L = 4.0;
  const auto g = grid2(16, L);
  SpectralVectorField f(g, 1);
  const long i = find_mode(*g, {0, 1, 0});
  REQUIRE(i >= 0);
  f[0][i] = Complex(0.3, -0.7);
  const auto h = inverse_modulus_gradient(f);
  CHECK(std::abs(h[0][i] - f[0][i] * (L / std::numbers::pi)) < 1e-15);

  SpectralVectorField z(g, 2);
  CHECK(max_abs(inverse_modulus_gradient(z)) == 0.0);

  SpectralVectorField mean(g, 1);
  mean[0][0] = 1.0;
  CHECK_THROWS_AS(inverse_modulus_gradient(mean), DomainError);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto r = random_field(g, 2, rng);
    CHECK(norm_squared(inverse_modulus_gradient(partial_derivative(r, 0, 1))) <= norm_squared(r) * (1.0 + 1e-14));
  }
}

TEST_CASE("advection") {
  const auto g = grid2(32, 4.0);
  std::mt19937_64 rng(13);

  SUBCASE("zero transport field") {
    SpectralVectorField a(g, 2);
    const auto b = random_field(g, 2, rng);
    CHECK(max_abs(advect(a, b)) == 0.0);
  }
  SUBCASE("constant transported field") {
    const auto a = random_field(g, 2, rng);
    SpectralVectorField b(g, 2);
    b[0][0] = 2.0;
    b[1][0] = -1.0;
    CHECK(max_abs(advect(a, b)) < 1e-15);
  }
  SUBCASE("grid mismatch") {
    SpectralVectorField a(g, 2), b(grid2(16, 4.0), 2);
    CHECK_THROWS_AS(advect(a, b), ConfigError);
  }
  SUBCASE("single modes against brute-force convolution") {
    const double k = std::numbers::pi / 4.0;
    const auto a = from_samples(g, 2, [&](int c, const std::array<double, 3>& x) {
      return c == 0 ? std::cos(k * x[1]) : 0.5 * std::sin(2 * k * x[0]);
    });
    const auto b = from_samples(g, 2, [&](int c, const std::array<double, 3>& x) {
      return c == 0 ? std::sin(3 * k * x[0] + k * x[1]) : std::cos(2 * k * x[1]);
    });
    const auto fast = advect(a, b);
    const oracle::Box box{2, 32, 4.0};
    std::vector<oracle::Spectrum> sa, sb;
    for (const auto& c : to_oracle(a)) sa.push_back(oracle::direct_forward(box, c));
    for (const auto& c : to_oracle(b)) sb.push_back(oracle::direct_forward(box, c));
    const auto slow = oracle::direct_advect(sa, sb);
    double worst = 0.0;
    for (int c = 0; c < 2; ++c)
      for (std::size_t i = 0; i < g->spectral_size(); ++i)
        worst = std::max(worst, std::abs(fast[c][i] - slow[c].c[oracle_index(*g, i)]));
    CHECK(worst < 1e-12);
  }
  SUBCASE("skew symmetry for divergence-free transport") {
    const auto a = random_solenoidal(g, rng);
    const auto b = random_field(g, 2, rng, 0.5);
    const auto c = random_field(g, 2, rng, 0.5);
    const double s = inner_product(advect(a, b), c) + inner_product(advect(a, c), b);
    CHECK(std::abs(s) < 1e-10);
  }
  SUBCASE("output is dealiased") {
    const auto a = random_field(g, 2, rng);
    const auto b = random_field(g, 2, rng);
    const auto out = advect(a, b);
    for (int c = 0; c < 2; ++c)
      for (std::size_t i = 0; i < g->spectral_size(); ++i)
        if (!g->kept(i)) CHECK(out[c][i] == Complex(0.0, 0.0));
  }
}

}  // TEST_SUITE
