#include "power_law.hpp"

#include <cmath>

#include "errors.hpp"

namespace alfven {

ScalingFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw DomainError("power-law fit: x and y differ in length");
  if (xs.size() < 3) throw DomainError("power-law fit needs at least 3 points");
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw DomainError("power-law fit needs positive finite data");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw DomainError("power-law fit needs at least two distinct x values");
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  fit.log_intercept = my - fit.exponent * mx;
  fit.points = static_cast<int>(xs.size());
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double e = ly[i] - (fit.exponent * lx[i] + fit.log_intercept);
      ss_res += e * e;
    }
    fit.r_squared = std::max(0.0, 1.0 - ss_res / syy);
  }
  return fit;
}

}  // namespace alfven
