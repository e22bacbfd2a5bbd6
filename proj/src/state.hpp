#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "spectral_field.hpp"
#include "weights.hpp"

namespace alfven {

/// (Lambda+, Lambda-) at fast time t*, with the Alfven number and resistivity.
struct ElsasserState {
  SpectralVectorField plus;
  SpectralVectorField minus;
  double t_star = 0.0;
  double epsilon = 1.0;
  double nu = 0.0;
  /// Hash of the initial data this state evolved from (0 when unknown).
  std::uint64_t data_hash = 0;

  const GridPtr& grid() const { return plus.grid(); }
  /// Checks eps*nu <= 1/2, mean-free and divergence-free (to `div_tol`) fields.
  void validate(double div_tol = 1e-10) const;
};

/// Dimensional parameters of the original system with mu_tilde = nu.
struct PhysicalConfig {
  double rho = 1.0;
  double lambda_perm = 1.0;
  double m = 1.0;
  double mu_tilde = 0.0;

  void validate() const;
  /// sqrt(4 pi rho / (lambda m^2))
  double epsilon() const;
  double nu() const { return mu_tilde; }
  /// |M_bar| = sqrt(lambda / (4 pi rho)) m; the impressed field points along e1.
  double impressed_field() const;
};

enum class DataMode { standard, large_data };

struct InitialDataConfig {
  double amplitude = 1.0;
  double support_radius = 4.0;
  /// Profile psi = A exp((m-1) - m/(1-|x|^2/R^2)); m = 1 is the classical bump.
  double sharpness = 8.0;
  std::array<double, 3> center_plus{0.0, 0.0, 0.0};
  std::array<double, 3> center_minus{0.0, 0.0, 0.0};
  /// Uniform random offset in [-jitter, jitter] per axis, drawn from `seed`.
  double center_jitter = 0.0;
  double gamma = 1.0;
  std::uint64_t seed = 0;
  DataMode mode = DataMode::standard;

  /// A, or A * eps^{-gamma/2} in large-data mode.
  double effective_amplitude(double epsilon) const;
  void validate(const GridSpec& grid) const;
};

struct InitialData {
  SpectralVectorField plus;
  SpectralVectorField minus;
  /// Largest |Lambda| at grid points outside B_R(center), relative to A.
  double support_leakage = 0.0;
  std::array<double, 3> center_plus{};
  std::array<double, 3> center_minus{};
};

std::pair<SpectralVectorField, SpectralVectorField> to_elsasser(const SpectralVectorField& v,
                                                                const SpectralVectorField& h);
std::pair<SpectralVectorField, SpectralVectorField> from_elsasser(const SpectralVectorField& lp,
                                                                  const SpectralVectorField& lm);

/// t* = t / eps
double rescale_time(double t_original, double epsilon);
/// t = eps t*
double original_time(double t_star, double epsilon);

/// Divergence-free data built from compactly supported bumps, amplitude `amplitude`.
InitialData make_initial_data(const InitialDataConfig& cfg, const GridPtr& grid, double amplitude);
inline InitialData make_initial_data(const InitialDataConfig& cfg, const GridPtr& grid) {
  return make_initial_data(cfg, grid, cfg.amplitude);
}

/// FNV-1a over the little-endian coefficient bytes of both fields.
std::uint64_t data_hash(const SpectralVectorField& plus, const SpectralVectorField& minus);

/// E^0_k with weights centred at the origin.
double initial_energy(const SpectralVectorField& plus0, const SpectralVectorField& minus0, const WeightSpec& spec,
                      double nu);

}  // namespace alfven
