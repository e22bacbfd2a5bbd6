#include "state.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "errors.hpp"
#include "functionals.hpp"

namespace alfven {

void ElsasserState::validate(double div_tol) const {
  if (plus.empty() || minus.empty()) throw ConfigError("state fields are empty");
  require_compatible(plus, minus, "ElsasserState");
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be non-negative");
  if (!(nu >= 0.0)) throw DomainError("nu must be non-negative");
  if (epsilon * nu > 0.5) throw ConfigError("hypothesis eps*nu <= 1/2 violated");
  for (const auto* f : {&plus, &minus}) {
    for (int c = 0; c < f->components(); ++c) {
      if (std::abs((*f)[c][0]) > 1e-10) throw DomainError("state field is not mean-free");
    }
    if (max_abs_divergence(*f) > div_tol) throw DomainError("state field is not divergence-free");
  }
}

void PhysicalConfig::validate() const {
  if (!(rho > 0.0) || !(lambda_perm > 0.0) || !(m > 0.0)) throw ConfigError("rho, lambda and m must be positive");
  if (!(mu_tilde >= 0.0)) throw ConfigError("mu_tilde must be non-negative");
}

double PhysicalConfig::epsilon() const {
  validate();
  return std::sqrt(4.0 * std::numbers::pi * rho / (lambda_perm * m * m));
}

double PhysicalConfig::impressed_field() const {
  validate();
  return std::sqrt(lambda_perm / (4.0 * std::numbers::pi * rho)) * m;
}

double InitialDataConfig::effective_amplitude(double epsilon) const {
  if (mode == DataMode::standard) return amplitude;
  if (!(epsilon > 0.0)) throw DomainError("large-data mode needs eps > 0");
  return amplitude * std::pow(epsilon, -0.5 * gamma);
}

void InitialDataConfig::validate(const GridSpec& grid) const {
  if (!(amplitude >= 0.0)) throw ConfigError("amplitude must be non-negative");
  if (!(support_radius > 0.0)) throw ConfigError("support_radius must be positive");
  if (!(sharpness >= 1.0)) throw ConfigError("sharpness must be >= 1");
  if (gamma > 2.0) throw ConfigError("gamma must satisfy gamma <= 2");
  if (!(center_jitter >= 0.0)) throw ConfigError("center_jitter must be non-negative");
  for (const auto& c : {center_plus, center_minus}) {
    double r2 = 0.0;
    for (int a = 0; a < grid.ndim(); ++a) r2 += c[a] * c[a];
    if (std::sqrt(r2) + support_radius + center_jitter * std::sqrt(grid.ndim()) > grid.half_length / 4.0)
      throw ConfigError("support radius too large for the box: need |center| + R <= L/4");
  }
}

std::pair<SpectralVectorField, SpectralVectorField> to_elsasser(const SpectralVectorField& v,
                                                                const SpectralVectorField& h) {
  require_compatible(v, h, "to_elsasser");
  return {v + h, v - h};
}

std::pair<SpectralVectorField, SpectralVectorField> from_elsasser(const SpectralVectorField& lp,
                                                                  const SpectralVectorField& lm) {
  require_compatible(lp, lm, "from_elsasser");
  return {0.5 * (lp + lm), 0.5 * (lp - lm)};
}

double rescale_time(double t_original, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("time rescaling needs eps > 0");
  return t_original / epsilon;
}

double original_time(double t_star, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("time rescaling needs eps > 0");
  return t_star * epsilon;
}

namespace {

PhysicalField sample_bump(const GridPtr& grid, const std::array<double, 3>& center, double radius, double sharpness,
                          double amplitude) {
  PhysicalField psi(grid, 1);
  const int n = grid->ndim();
  const double R2 = radius * radius;
  for (std::size_t p = 0; p < grid->physical_size(); ++p) {
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const double d = grid->coordinate(p, a) - center[a];
      r2 += d * d;
    }
    const double u = r2 / R2;
    psi.comps[0][p] = u < 1.0 ? amplitude * std::exp((sharpness - 1.0) - sharpness / (1.0 - u)) : 0.0;
  }
  return psi;
}

SpectralVectorField solenoidal_from_bump(const SpectralVectorField& psi_hat) {
  const auto& grid = psi_hat.grid();
  const int n = grid->ndim();
  const auto grad = gradient(psi_hat);
  SpectralVectorField out(grid, n);
  if (n == 2) {
    // perpendicular gradient (-d2 psi, d1 psi)
    out[0] = grad[1];
    for (auto& v : out[0]) v = -v;
    out[1] = grad[0];
  } else {
    // curl(psi e) = grad psi x e, e = (1,1,1)/sqrt(3)
    const double e = 1.0 / std::sqrt(3.0);
    for (std::size_t i = 0; i < grid->spectral_size(); ++i) {
      out[0][i] = e * (grad[1][i] - grad[2][i]);
      out[1][i] = e * (grad[2][i] - grad[0][i]);
      out[2][i] = e * (grad[0][i] - grad[1][i]);
    }
  }
  return leray_project(out);
}

double leakage(const SpectralVectorField& f, const std::array<double, 3>& center, double radius) {
  const auto mag = transform_to_physical(f).magnitude();
  const auto& grid = *f.grid();
  double worst = 0.0;
  for (std::size_t p = 0; p < grid.physical_size(); ++p) {
    double r2 = 0.0;
    for (int a = 0; a < grid.ndim(); ++a) {
      const double d = grid.coordinate(p, a) - center[a];
      r2 += d * d;
    }
    if (r2 >= radius * radius) worst = std::max(worst, mag[p]);
  }
  return worst;
}

}  // namespace

InitialData make_initial_data(const InitialDataConfig& cfg, const GridPtr& grid, double amplitude) {
  cfg.validate(grid->spec());
  if (!(amplitude >= 0.0)) throw ConfigError("amplitude must be non-negative");
  InitialData data;
  data.center_plus = cfg.center_plus;
  data.center_minus = cfg.center_minus;
  if (cfg.center_jitter > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(-cfg.center_jitter, cfg.center_jitter);
    for (int a = 0; a < grid->ndim(); ++a) data.center_plus[a] += dist(rng);
    for (int a = 0; a < grid->ndim(); ++a) data.center_minus[a] += dist(rng);
  }
  const auto build = [&](const std::array<double, 3>& c) {
    return solenoidal_from_bump(
        transform_to_spectral(sample_bump(grid, c, cfg.support_radius, cfg.sharpness, amplitude)));
  };
  data.plus = build(data.center_plus);
  data.minus = build(data.center_minus);
  if (amplitude > 0.0) {
    data.support_leakage = std::max(leakage(data.plus, data.center_plus, cfg.support_radius),
                                    leakage(data.minus, data.center_minus, cfg.support_radius)) /
                           amplitude;
  }
  return data;
}

double initial_energy(const SpectralVectorField& plus0, const SpectralVectorField& minus0, const WeightSpec& spec,
                      double nu) {
  ElsasserState s;
  s.plus = plus0;
  s.minus = minus0;
  s.t_star = 0.0;
  s.nu = nu;
  s.epsilon = 0.0;
  return energy_Ek(s, spec);
}

std::uint64_t data_hash(const SpectralVectorField& plus, const SpectralVectorField& minus) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto* f : {&plus, &minus}) {
    for (int c = 0; c < f->components(); ++c) {
      for (const auto& z : (*f)[c]) {
        const double parts[2] = {z.real(), z.imag()};
        unsigned char bytes[sizeof parts];
        std::memcpy(bytes, parts, sizeof parts);
        for (unsigned char b : bytes) {
          h ^= b;
          h *= 1099511628211ULL;
        }
      }
    }
  }
  return h;
}

}  // namespace alfven
