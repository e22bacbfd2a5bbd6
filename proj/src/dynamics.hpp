#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "state.hpp"

namespace alfven {

struct TendencyReport {
  SpectralVectorField rhs_plus;
  SpectralVectorField rhs_minus;
  SpectralVectorField pressure;  // one component
  /// dt-free advective CFL indicator: dx^{-1} (1 + eps max|Lambda|).
  double cfl_number = 0.0;
};

enum class Scheme {
  rk4,
  /// Exact transport half steps around an RK4 step of the remaining terms.
  strang_rk4,
};

struct TimeStepperConfig {
  double dt = 0.01;
  Scheme scheme = Scheme::rk4;
  double t_end = 0.0;
  /// Snapped to the nearest step; out-of-range times are ignored.
  std::vector<double> sample_times;
};

using SampleSink = std::function<void(const ElsasserState&)>;

/// Coefficients above this magnitude (or non-finite) count as blow-up.
inline constexpr double kBlowUpThreshold = 1e12;

/// p_hat = -eps sum_ij xi_i xi_j FFT(Lm_i Lp_j) / |xi|^2, dealiased products, p_hat(0) = 0.
SpectralVectorField pressure_solve(const SpectralVectorField& lp, const SpectralVectorField& lm, double epsilon);

/// rhs+- = +-d1 L+- - eps (L-+ . grad) L+- - grad p + eps nu Lap L+-.
TendencyReport nonlinear_rhs(const ElsasserState& state);

/// Largest admissible |dt| for the state under the explicit CFL contract.
double max_stable_dt(const ElsasserState& state);

/// One step followed by Leray re-projection. Throws ConfigError on CFL violation
/// and BlowUpError when the new state is non-finite or exceeds the threshold.
ElsasserState step_rk4(const ElsasserState& state, double dt, Scheme scheme = Scheme::rk4);

/// Integrates from state.t_star to cfg.t_end (either direction when nu = 0).
/// The sink sees the state at every snapped sample time.
ElsasserState evolve(const ElsasserState& state, const TimeStepperConfig& cfg, const SampleSink& sink = {});

/// Exact multiplier exp(+-i xi_1 t* - eps nu |xi|^2 t*) applied to (L0+, L0-).
std::pair<SpectralVectorField, SpectralVectorField> linear_evolve(const SpectralVectorField& plus0,
                                                                  const SpectralVectorField& minus0, double t_star,
                                                                  double epsilon, double nu);

/// (L+ - L+_L, L- - L-_L). `linear_t_star` must equal state.t_star.
std::pair<SpectralVectorField, SpectralVectorField> error_field(const ElsasserState& state,
                                                                const SpectralVectorField& linear_plus,
                                                                const SpectralVectorField& linear_minus,
                                                                double linear_t_star);

/// (L+_nu - L+_0, L-_nu - L-_0) of two runs from identical data.
std::pair<SpectralVectorField, SpectralVectorField> nu_difference(const ElsasserState& state_nu,
                                                                  const ElsasserState& state_0);

/// True when any coefficient is non-finite or above kBlowUpThreshold.
bool blown_up(const SpectralVectorField& f);

}  // namespace alfven
