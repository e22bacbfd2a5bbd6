#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <vector>

namespace alfven {

/// <sigma> = sqrt(1 + |sigma|^2)
inline double japanese_bracket(double sigma2) {
  // takes |sigma|^2 to avoid a sqrt/square round trip in hot loops
  return std::sqrt(1.0 + sigma2);
}

/// Tabulated ghost weight q(y) = int_0^y <tau>^{-2s} dtau.
///
/// Nodes are spaced 1e-3 on [0, 16]; between nodes q is the cubic Hermite
/// interpolant using the exact derivative <y>^{-2s}. Beyond the table the
/// tail int_y^inf <tau>^{-2s} is summed from its asymptotic series and
/// subtracted from the closed-form limit q(inf).
class GhostTable {
 public:
  explicit GhostTable(double s, double spacing = 1e-3, double y_max = 16.0);

  double s() const { return s_; }
  double spacing() const { return h_; }
  double y_max() const { return y_max_; }
  double q_infinity() const { return q_inf_; }
  const std::vector<double>& nodes() const { return values_; }

  double q(double y) const;
  /// exp(q(sigma)) for sigma = +-x1 - t.
  double ghost_weight(double sigma) const { return std::exp(q(sigma)); }

 private:
  double tail(double y) const;

  double s_;
  double h_;
  double y_max_;
  double q_inf_;
  std::vector<double> values_;
};

/// Weight exponent s, derivative order k and the shared ghost table.
struct WeightSpec {
  double s = 0.6;
  int k = 4;
  std::shared_ptr<const GhostTable> ghost;

  /// Validates 1 < 2s < 4/3 and k >= 1, then builds the ghost table.
  static WeightSpec make(double s, int k);
  /// Same s and ghost table, different order (used for the k-1 error functionals).
  WeightSpec with_order(int order) const;
};

double ghost_q(double y, const WeightSpec& spec);

/// <x + sign * e1 t>^power for a point x (unwrapped coordinates).
double moving_weight(const std::array<double, 3>& x, int ndim, double t_star, int sign, double power);

}  // namespace alfven
