#include "functionals.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace alfven {

namespace {

struct WeightedSums {
  double zeroth = 0.0;
  std::vector<double> blocks;  // index m = |alpha|, 1..k
  double W = 0.0;
  double D = 0.0;
};

void enumerate(int ndim, int order, int axis, std::array<int, 3>& cur, std::vector<std::array<int, 3>>& out) {
  if (axis == ndim - 1) {
    cur[axis] = order;
    out.push_back(cur);
    cur[axis] = 0;
    return;
  }
  for (int p = order; p >= 0; --p) {
    cur[axis] = p;
    enumerate(ndim, order - p, axis + 1, cur, out);
  }
  cur[axis] = 0;
}

// Sums of |d^beta f|^2 against the moving weights of one Elsasser field.
// `sign` = +1 for Lambda+ (centre x + e1 t, denominator <x1 - t>), -1 for Lambda-.
WeightedSums weighted_sums(const SpectralVectorField& f, int sign, double t, double s, int k, bool with_D) {
  const auto& g = *f.grid();
  const int n = g.ndim();
  const std::size_t np = g.physical_size();
  const double cell = g.cell_volume();

  RealArray w_s(np), w_2s(np), inv_den(np);
  for (std::size_t p = 0; p < np; ++p) {
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const double c = g.coordinate(p, a) + (a == 0 ? sign * t : 0.0);
      r2 += c * c;
    }
    const double x1 = g.coordinate(p, 0) - sign * t;
    w_s[p] = std::pow(1.0 + r2, s);  // <x +- e1 t>^{2s}
    w_2s[p] = w_s[p] * w_s[p];       // <x +- e1 t>^{4s}
    inv_den[p] = std::pow(1.0 + x1 * x1, -s);
  }

  WeightedSums out;
  out.blocks.assign(k + 1, 0.0);
  const int top = with_D ? k + 1 : k;
  RealArray q(np), tmp(np);
  for (int m = 0; m <= top; ++m) {
    for (const auto& beta : multi_indices(n, m)) {
      const auto d = derivative(f, beta);
      std::fill(q.begin(), q.end(), 0.0);
      for (int c = 0; c < f.components(); ++c) {
        g.inverse(d[c].data(), tmp.data());
        for (std::size_t p = 0; p < np; ++p) q[p] += tmp[p] * tmp[p];
      }
      double plain = 0.0, ws = 0.0, w2 = 0.0, ws_den = 0.0, w2_den = 0.0;
      for (std::size_t p = 0; p < np; ++p) {
        plain += q[p];
        ws += w_s[p] * q[p];
        w2 += w_2s[p] * q[p];
        ws_den += w_s[p] * q[p] * inv_den[p];
        w2_den += w_2s[p] * q[p] * inv_den[p];
      }
      if (m == 0) {
        out.zeroth += cell * ws;
        out.W += cell * ws_den;
      } else if (m <= k) {
        out.blocks[m] += cell * w2;
        out.W += cell * w2_den;
      }
      if (with_D) {
        if (m == 0) {
          out.D += cell * plain;
        } else if (m == 1) {
          out.D += cell * ws;
        } else {
          // number of (alpha, j) pairs with alpha + e_j = beta and |alpha| >= 1
          int pairs = 0;
          for (int a = 0; a < n; ++a) pairs += beta[a] > 0 ? 1 : 0;
          out.D += cell * pairs * w2;
        }
      }
    }
  }
  return out;
}

double inverse_term(const SpectralVectorField& f) { return norm_squared(inverse_modulus_gradient(f)); }

RealArray weighted_magnitude_sup_weights(const Grid& g, double t, int sign, double s) {
  RealArray w(g.physical_size());
  for (std::size_t p = 0; p < g.physical_size(); ++p) {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < g.ndim(); ++a) x[a] = g.coordinate(p, a);
    w[p] = moving_weight(x, g.ndim(), t, sign, s);
  }
  return w;
}

double weighted_sup(const SpectralVectorField& f, double t, int sign, double s) {
  const auto& g = *f.grid();
  const auto mag = transform_to_physical(f).magnitude();
  const auto w = weighted_magnitude_sup_weights(g, t, sign, s);
  double m = 0.0;
  for (std::size_t p = 0; p < mag.size(); ++p) m = std::max(m, w[p] * mag[p]);
  return m;
}

void fill_report(FunctionalReport& r, const SpectralVectorField& plus, const SpectralVectorField& minus, double t,
                 double nu, const WeightSpec& spec, int order, const MeasurementOptions& opts) {
  require_compatible(plus, minus, "functionals");
  r.t_star = t;
  r.order = order;
  const auto sp = weighted_sums(plus, +1, t, spec.s, order, true);
  const auto sm = weighted_sums(minus, -1, t, spec.s, order, true);
  r.inverse_monitor = inverse_term(plus) + inverse_term(minus);
  r.e_inverse = nu > 0.0 ? r.inverse_monitor : 0.0;
  r.e_zeroth = sp.zeroth + sm.zeroth;
  r.e_blocks.assign(order, 0.0);
  double blocks = 0.0;
  for (int m = 1; m <= order; ++m) {
    r.e_blocks[m - 1] = sp.blocks[m] + sm.blocks[m];
    blocks += r.e_blocks[m - 1];
  }
  r.E = r.e_inverse + r.e_zeroth + blocks;
  r.W = sp.W + sm.W;
  r.D = sp.D + sm.D;
  r.decay_plus = weighted_sup(plus, t, +1, spec.s);
  r.decay_minus = weighted_sup(minus, t, -1, spec.s);
  r.ball_sup = std::max(ball_sup(plus, opts.ball_radius), ball_sup(minus, opts.ball_radius));
  r.sobolev.assign(order + 1, 0.0);
  for (int j = 0; j <= order; ++j)
    r.sobolev[j] = std::sqrt(sobolev_norm_squared(plus, j) + sobolev_norm_squared(minus, j));
  r.valid = window_valid(t, opts.support_radius, plus.grid()->half_length());
}

}  // namespace

std::vector<std::array<int, 3>> multi_indices(int ndim, int order) {
  std::vector<std::array<int, 3>> out;
  std::array<int, 3> cur{0, 0, 0};
  enumerate(ndim, order, 0, cur, out);
  return out;
}

bool window_valid(double t_star, double support_radius, double half_length) {
  return t_star + support_radius < half_length;
}

double energy_Ek(const ElsasserState& state, const WeightSpec& spec) {
  const auto sp = weighted_sums(state.plus, +1, state.t_star, spec.s, spec.k, false);
  const auto sm = weighted_sums(state.minus, -1, state.t_star, spec.s, spec.k, false);
  double e = sp.zeroth + sm.zeroth;
  for (int m = 1; m <= spec.k; ++m) e += sp.blocks[m] + sm.blocks[m];
  if (state.nu > 0.0) e += inverse_term(state.plus) + inverse_term(state.minus);
  return e;
}

double weighted_Wk(const ElsasserState& state, const WeightSpec& spec) {
  return weighted_sums(state.plus, +1, state.t_star, spec.s, spec.k, false).W +
         weighted_sums(state.minus, -1, state.t_star, spec.s, spec.k, false).W;
}

double dissipation_Dk(const ElsasserState& state, const WeightSpec& spec) {
  return weighted_sums(state.plus, +1, state.t_star, spec.s, spec.k, true).D +
         weighted_sums(state.minus, -1, state.t_star, spec.s, spec.k, true).D;
}

FunctionalReport measure(const ElsasserState& state, const WeightSpec& spec, const MeasurementOptions& opts) {
  FunctionalReport r;
  fill_report(r, state.plus, state.minus, state.t_star, state.nu, spec, spec.k, opts);
  return r;
}

FunctionalReport error_functionals(const SpectralVectorField& err_plus, const SpectralVectorField& err_minus,
                                   double t_star, double nu, const WeightSpec& spec, const MeasurementOptions& opts) {
  if (spec.k < 2) throw ConfigError("error functionals need k >= 2");
  FunctionalReport r;
  fill_report(r, err_plus, err_minus, t_star, nu, spec, spec.k - 1, opts);
  return r;
}

std::pair<double, double> decay_diagnostic(const ElsasserState& state, const WeightSpec& spec) {
  return {weighted_sup(state.plus, state.t_star, +1, spec.s), weighted_sup(state.minus, state.t_star, -1, spec.s)};
}

double ball_sup(const SpectralVectorField& f, double radius) {
  const auto& g = *f.grid();
  const auto mag = transform_to_physical(f).magnitude();
  double m = 0.0;
  for (std::size_t p = 0; p < mag.size(); ++p) {
    double r2 = 0.0;
    for (int a = 0; a < g.ndim(); ++a) {
      const double x = g.coordinate(p, a);
      r2 += x * x;
    }
    if (r2 < radius * radius) m = std::max(m, mag[p]);
  }
  return m;
}

double ball_sup(const ElsasserState& state, double radius) {
  return std::max(ball_sup(state.plus, radius), ball_sup(state.minus, radius));
}

double sobolev_norm_squared(const SpectralVectorField& f, int j) {
  const auto& g = *f.grid();
  std::vector<double> mult(g.spectral_size(), 0.0);
  for (int m = 0; m <= j; ++m) {
    for (const auto& alpha : multi_indices(g.ndim(), m)) {
      for (std::size_t i = 0; i < g.spectral_size(); ++i) mult[i] += std::norm(g.derivative_multiplier(i, alpha));
    }
  }
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c)
    for (std::size_t i = 0; i < g.spectral_size(); ++i) s += g.parseval_weight(i) * mult[i] * std::norm(f[c][i]);
  return s * std::pow(2.0 * g.half_length(), g.ndim());
}

std::vector<std::string> report_columns(int order) {
  std::vector<std::string> cols{"t_star", "E_k", "W_k", "D_k", "E_inverse", "E_zeroth"};
  for (int m = 1; m <= order; ++m) cols.push_back("E_alpha" + std::to_string(m));
  cols.insert(cols.end(), {"decay_plus", "decay_minus", "ball_sup"});
  for (int j = 0; j <= order; ++j) cols.push_back("sobolev_" + std::to_string(j));
  cols.insert(cols.end(), {"inverse_monitor", "valid"});
  return cols;
}

std::string report_csv_header(int order) {
  std::string out;
  for (const auto& c : report_columns(order)) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

std::string report_csv_row(const FunctionalReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.t_star << ',' << r.E << ',' << r.W << ',' << r.D << ',' << r.e_inverse << ',' << r.e_zeroth;
  for (double b : r.e_blocks) os << ',' << b;
  os << ',' << r.decay_plus << ',' << r.decay_minus << ',' << r.ball_sup;
  for (double v : r.sobolev) os << ',' << v;
  os << ',' << r.inverse_monitor << ',' << (r.valid ? 1 : 0);
  return os.str();
}

}  // namespace alfven
