#pragma once

#include <vector>

namespace alfven {

struct ScalingFit {
  double exponent = 0.0;
  double log_intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

/// OLS fit of log y = a log x + b. Needs >= 3 points, all positive (DomainError otherwise).
ScalingFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace alfven
