#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "state.hpp"
#include "weights.hpp"

namespace alfven {

/// One time sample of the weighted functionals and pointwise diagnostics.
struct FunctionalReport {
  double t_star = 0.0;
  int order = 0;  // k used for E/W/D
  double E = 0.0;
  double W = 0.0;
  double D = 0.0;
  double e_inverse = 0.0;        // sign(nu) * ||(|grad|^-1 L+, |grad|^-1 L-)||_0^2, as included in E
  double inverse_monitor = 0.0;  // the same norm, computed for every nu (report only)
  double e_zeroth = 0.0;         // ||(<x+e1t>^s L+, <x-e1t>^s L-)||_0^2
  std::vector<double> e_blocks;  // |alpha| = 1..order
  double decay_plus = 0.0;       // sup_x <x+e1t>^s |L+|
  double decay_minus = 0.0;      // sup_x <x-e1t>^s |L-|
  double ball_sup = 0.0;         // sup_{|x|<R} max(|L+|, |L-|)
  std::vector<double> sobolev;   // ||(L+, L-)||_j, j = 0..order
  bool valid = true;
};

struct MeasurementOptions {
  double ball_radius = 4.0;
  /// Radius of the data support; a sample is valid while t* + radius < L.
  double support_radius = 4.0;
};

/// Packet stays inside the box: t* + support_radius < L.
bool window_valid(double t_star, double support_radius, double half_length);

double energy_Ek(const ElsasserState& state, const WeightSpec& spec);
double weighted_Wk(const ElsasserState& state, const WeightSpec& spec);
double dissipation_Dk(const ElsasserState& state, const WeightSpec& spec);

/// All functionals, diagnostics and Sobolev norms at order spec.k.
FunctionalReport measure(const ElsasserState& state, const WeightSpec& spec, const MeasurementOptions& opts);

/// Functionals of the error fields at order spec.k - 1 (nu only gates the |grad|^-1 term).
FunctionalReport error_functionals(const SpectralVectorField& err_plus, const SpectralVectorField& err_minus,
                                   double t_star, double nu, const WeightSpec& spec, const MeasurementOptions& opts);

std::pair<double, double> decay_diagnostic(const ElsasserState& state, const WeightSpec& spec);
double ball_sup(const ElsasserState& state, double radius);
double ball_sup(const SpectralVectorField& f, double radius);

/// ||f||_j^2 = sum_{|alpha| <= j} ||d^alpha f||_0^2
double sobolev_norm_squared(const SpectralVectorField& f, int j);

/// All multi-indices with |alpha| = order in `ndim` dimensions.
std::vector<std::array<int, 3>> multi_indices(int ndim, int order);

/// CSV column names in output order for reports of the given order.
std::vector<std::string> report_columns(int order);
std::string report_csv_header(int order);
std::string report_csv_row(const FunctionalReport& r);

}  // namespace alfven
