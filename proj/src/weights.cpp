#include "weights.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace alfven {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussNodes{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                            0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                              0.4786286704993665, 0.2369268850561891};

}  // namespace

GhostTable::GhostTable(double s, double spacing, double y_max) : s_(s), h_(spacing), y_max_(y_max) {
  if (!(s > 0.5)) throw DomainError("ghost weight needs 2s > 1 for a finite limit");
  if (!(spacing > 0.0) || spacing > 1e-3) throw ConfigError("ghost table spacing must lie in (0, 1e-3]");
  const auto integrand = [s](double t) { return std::pow(1.0 + t * t, -s); };
  const auto n = static_cast<std::size_t>(std::llround(y_max / spacing));
  y_max_ = n * spacing;
  values_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i * spacing;
    const double mid = a + 0.5 * spacing;
    double cell = 0.0;
    for (int g = 0; g < 5; ++g) cell += kGaussWeights[g] * integrand(mid + 0.5 * spacing * kGaussNodes[g]);
    values_[i + 1] = values_[i] + 0.5 * spacing * cell;
  }
  // int_0^inf (1 + t^2)^{-s} dt = sqrt(pi) Gamma(s - 1/2) / (2 Gamma(s))
  q_inf_ = std::sqrt(std::numbers::pi) * std::tgamma(s - 0.5) / (2.0 * std::tgamma(s));
}

double GhostTable::tail(double y) const {
  // int_y^inf t^{-2s} (1 + t^{-2})^{-s} dt expanded binomially; y >= y_max >= 16.
  double sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j < 30; ++j) {
    const double term = binom * std::pow(y, 1.0 - 2.0 * s_ - 2.0 * j) / (2.0 * s_ + 2.0 * j - 1.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    binom *= (-s_ - j) / (j + 1.0);
  }
  return sum;
}

double GhostTable::q(double y) const {
  if (y < 0.0) return -q(-y);
  if (y >= y_max_) return q_inf_ - tail(y);
  const double pos = y / h_;
  auto i = static_cast<std::size_t>(pos);
  if (i >= values_.size() - 1) i = values_.size() - 2;
  const double u = pos - static_cast<double>(i);
  const double y0 = i * h_;
  const double y1 = y0 + h_;
  const double d0 = std::pow(1.0 + y0 * y0, -s_) * h_;
  const double d1 = std::pow(1.0 + y1 * y1, -s_) * h_;
  const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
  const double h10 = u * (1.0 - u) * (1.0 - u);
  const double h01 = u * u * (3.0 - 2.0 * u);
  const double h11 = u * u * (u - 1.0);
  return h00 * values_[i] + h10 * d0 + h01 * values_[i + 1] + h11 * d1;
}

WeightSpec WeightSpec::make(double s, int k) {
  if (!(2.0 * s > 1.0 && 2.0 * s < 4.0 / 3.0))
    throw ConfigError("weight exponent must satisfy 1 < 2s < 4/3, got s = " + std::to_string(s));
  if (k < 1) throw ConfigError("derivative order k must be >= 1");
  WeightSpec w;
  w.s = s;
  w.k = k;
  w.ghost = std::make_shared<const GhostTable>(s);
  return w;
}

WeightSpec WeightSpec::with_order(int order) const {
  if (order < 1) throw ConfigError("derivative order must be >= 1");
  WeightSpec w = *this;
  w.k = order;
  return w;
}

double ghost_q(double y, const WeightSpec& spec) {
  if (!spec.ghost) throw ConfigError("ghost table not built");
  return spec.ghost->q(y);
}

double moving_weight(const std::array<double, 3>& x, int ndim, double t_star, int sign, double power) {
  double r2 = 0.0;
  for (int a = 0; a < ndim; ++a) {
    const double c = a == 0 ? x[0] + sign * t_star : x[a];
    r2 += c * c;
  }
  return std::pow(1.0 + r2, 0.5 * power);
}

}  // namespace alfven
