#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "spectral_field.hpp"
#include "state.hpp"

namespace testing {

using namespace alfven;

inline GridPtr grid2(int N, double L) { return Grid::make(GridSpec{{N, N}, L, 2.0 / 3.0}); }

/// Half-spectrum index of the signed wave vector (m0, m1[, m2]), or -1.
inline long find_mode(const Grid& g, std::array<int, 3> m) {
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    bool ok = true;
    for (int a = 0; a < g.ndim(); ++a) ok = ok && g.wave_index(i, a) == m[a];
    if (ok) return static_cast<long>(i);
  }
  return -1;
}

template <class F>
SpectralVectorField from_samples(const GridPtr& g, int comps, F&& f) {
  PhysicalField p(g, comps);
  for (std::size_t q = 0; q < g->physical_size(); ++q) {
    std::array<double, 3> x{0, 0, 0};
    for (int a = 0; a < g->ndim(); ++a) x[a] = g->coordinate(q, a);
    for (int c = 0; c < comps; ++c) p.comps[c][q] = f(c, x);
  }
  return transform_to_spectral(p);
}

/// Real random field with a Gaussian spectral envelope and zero mean.
inline SpectralVectorField random_field(const GridPtr& g, int comps, std::mt19937_64& rng, double width = 0.0) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  PhysicalField p(g, comps);
  for (auto& c : p.comps)
    for (auto& v : c) v = gauss(rng);
  auto f = transform_to_spectral(p);
  for (int c = 0; c < comps; ++c) {
    f[c][0] = 0.0;
    if (width > 0.0)
      for (std::size_t i = 0; i < g->spectral_size(); ++i) f[c][i] *= std::exp(-g->k2(i) * width * width);
  }
  return f;
}

inline SpectralVectorField random_solenoidal(const GridPtr& g, std::mt19937_64& rng, double width = 0.5) {
  return leray_project(random_field(g, g->ndim(), rng, width));
}

/// Perpendicular gradients of low-mode stream functions on [-L, L)^2.
inline ElsasserState smooth_state(int N, double L, double eps, double nu) {
  const auto g = grid2(N, L);
  const double k = std::numbers::pi / L;
  auto psi_p = from_samples(g, 1, [&](int, const std::array<double, 3>& x) {
    return std::sin(k * x[0]) * std::cos(k * x[1]) + 0.3 * std::cos(k * x[0] + k * x[1]);
  });
  auto psi_m = from_samples(g, 1, [&](int, const std::array<double, 3>& x) {
    return std::cos(k * x[0]) * std::sin(k * x[1]) - 0.2 * std::sin(k * x[0] - k * x[1]);
  });
  auto perp = [&](const SpectralVectorField& psi) {
    const auto gr = gradient(psi);
    SpectralVectorField v(g, 2);
    v[0] = gr[1];
    for (auto& z : v[0]) z = -z;
    v[1] = gr[0];
    return v;
  };
  ElsasserState s;
  s.plus = perp(psi_p);
  s.minus = perp(psi_m);
  s.epsilon = eps;
  s.nu = nu;
  return s;
}

inline oracle::Field to_oracle(const SpectralVectorField& f) {
  const auto p = transform_to_physical(f);
  oracle::Field out;
  for (const auto& c : p.comps) out.emplace_back(c.begin(), c.end());
  return out;
}

/// Oracle full-spectrum index of the fast-path half-spectrum index i.
inline std::size_t oracle_index(const Grid& g, std::size_t i) {
  const int N = g.spec().dims[0];
  std::size_t flat = 0;
  for (int a = 0; a < g.ndim(); ++a) flat = flat * N + static_cast<std::size_t>(((g.wave_index(i, a) % N) + N) % N);
  return flat;
}

/// Samples reflected in x1 (index i0 -> -i0 mod N), first component negated
/// so that divergence-free fields stay divergence-free.
inline SpectralVectorField reflect_x1(const SpectralVectorField& f) {
  const auto& g = f.grid();
  const auto p = transform_to_physical(f);
  PhysicalField out(g, p.components());
  const int N = g->spec().dims[0];
  const std::size_t stride = g->physical_size() / N;
  for (int c = 0; c < p.components(); ++c)
    for (std::size_t q = 0; q < g->physical_size(); ++q) {
      const int i0 = static_cast<int>(q / stride);
      const int j0 = (N - i0) % N;
      out.comps[c][q] = (c == 0 ? -1.0 : 1.0) * p.comps[c][j0 * stride + q % stride];
    }
  return transform_to_spectral(out);
}

inline double max_abs(const SpectralVectorField& f) { return max_coefficient(f); }

}  // namespace testing
