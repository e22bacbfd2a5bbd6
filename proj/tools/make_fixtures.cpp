// Regenerates the regression fixtures under tests/fixtures from the slow
// reference implementations:
//
//   make_fixtures tests/fixtures
//
// Each fixture is a checkpoint (<name>.ckpt) plus <name>.json with the
// reference values computed by direct summation.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "checkpoint.hpp"
#include "oracle.hpp"
#include "spectral_field.hpp"
#include "state.hpp"

using namespace alfven;
using nlohmann::json;

namespace {

oracle::Field samples_of(const SpectralVectorField& f) {
  const auto p = transform_to_physical(f);
  oracle::Field out;
  for (const auto& c : p.comps) out.emplace_back(c.begin(), c.end());
  return out;
}

ElsasserState smooth_state(int N, double L) {
  const auto grid = Grid::make(GridSpec{{N, N}, L, 2.0 / 3.0});
  PhysicalField pp(grid, 1), pm(grid, 1);
  const double k = std::acos(-1.0) / L;
  for (std::size_t q = 0; q < grid->physical_size(); ++q) {
    const double x = grid->coordinate(q, 0), y = grid->coordinate(q, 1);
    pp.comps[0][q] = std::sin(k * x) * std::cos(k * y) + 0.3 * std::cos(k * x + k * y);
    pm.comps[0][q] = std::cos(k * x) * std::sin(k * y) - 0.2 * std::sin(k * x - k * y);
  }
  auto perp = [&](const SpectralVectorField& psi) {
    const auto g = gradient(psi);
    SpectralVectorField v(grid, 2);
    v[0] = g[1];
    for (auto& z : v[0]) z = -z;
    v[1] = g[0];
    return v;
  };
  ElsasserState s;
  s.plus = perp(transform_to_spectral(pp));
  s.minus = perp(transform_to_spectral(pm));
  return s;
}

ElsasserState bump_state(const GridSpec& g, double R, double sharpness) {
  InitialDataConfig init;
  init.support_radius = R;
  init.sharpness = sharpness;
  const auto grid = Grid::make(g);
  const auto d = make_initial_data(init, grid);
  ElsasserState s;
  s.plus = d.plus;
  s.minus = d.minus;
  s.data_hash = data_hash(d.plus, d.minus);
  return s;
}

void emit(const std::string& dir, const std::string& name, ElsasserState st, double t, double eps, double nu,
          double s, int k) {
  st.t_star = t;
  st.epsilon = eps;
  st.nu = nu;
  write_checkpoint(dir + "/" + name + ".ckpt", st, s, k);

  const auto& spec = st.grid()->spec();
  const oracle::Box box{spec.ndim(), spec.dims[0], spec.half_length};
  const auto lp = samples_of(st.plus), lm = samples_of(st.minus);
  const auto f = oracle::direct_functional(box, lp, lm, t, s, k, nu, oracle::DerivativeMode::direct_dft);

  std::vector<oracle::Spectrum> a, b;
  for (const auto& c : lm) a.push_back(oracle::direct_forward(box, c));
  for (const auto& c : lp) b.push_back(oracle::direct_forward(box, c));
  const auto adv = oracle::direct_advect(a, b, spec.dealias_fraction);
  double n2 = 0.0;
  for (const auto& comp : adv)
    for (const auto& c : comp.c) n2 += std::norm(c);
  n2 *= std::pow(2.0 * spec.half_length, spec.ndim());

  json j;
  j["fixture"] = name;
  j["checkpoint"] = name + ".ckpt";
  j["t_star"] = t;
  j["epsilon"] = eps;
  j["nu"] = nu;
  j["s"] = s;
  j["k"] = k;
  j["rel_tol"] = 1e-10;
  j["E"] = f.E;
  j["W"] = f.W;
  j["D"] = f.D;
  j["e_inverse"] = f.e_inverse;
  j["e_zeroth"] = f.e_zeroth;
  j["advect_minus_plus_norm2"] = n2;
  std::ofstream out(dir + "/" + name + ".json");
  out.precision(17);
  out << j.dump(2) << "\n";
  std::printf("%s: E=%.15g W=%.15g D=%.15g advect=%.15g\n", name.c_str(), f.E, f.W, f.D, n2);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: make_fixtures OUTPUT_DIR\n");
    return 2;
  }
  const std::string dir = argv[1];
  try {
    emit(dir, "smooth32", smooth_state(32, 4.0), 0.7, 0.3, 0.5, 0.6, 4);
    emit(dir, "bump32", bump_state(GridSpec{{32, 32}, 16.0, 2.0 / 3.0}, 4.0, 1.0), 1.5, 0.2, 0.0, 0.6, 4);
    emit(dir, "bump3d12", bump_state(GridSpec{{12, 12, 12}, 6.0, 2.0 / 3.0}, 1.5, 1.0), 0.4, 0.5, 0.2, 0.6, 4);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "make_fixtures: %s\n", e.what());
    return 1;
  }
  return 0;
}
