#include "oracle.hpp"

#include <numbers>
#include <stdexcept>

namespace alfven::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

struct Multi {
  std::array<int, 3> j{0, 0, 0};
};

Multi unflatten(const Box& b, std::size_t idx) {
  Multi m;
  for (int a = b.n - 1; a >= 0; --a) {
    m.j[a] = static_cast<int>(idx % static_cast<std::size_t>(b.N));
    idx /= static_cast<std::size_t>(b.N);
  }
  return m;
}

std::size_t flatten(const Box& b, const std::array<int, 3>& j) {
  std::size_t idx = 0;
  for (int a = 0; a < b.n; ++a) idx = idx * static_cast<std::size_t>(b.N) + static_cast<std::size_t>(j[a]);
  return idx;
}

int wrap(int j, int N) { return ((j % N) + N) % N; }

// exp(2 pi i m j / N) for m, j in [0, N)
std::vector<Complex> phase_table(int N, int sign) {
  std::vector<Complex> t(static_cast<std::size_t>(N) * N);
  for (int m = 0; m < N; ++m)
    for (int j = 0; j < N; ++j) {
      const double arg = sign * 2.0 * kPi * static_cast<double>((static_cast<long>(m) * j) % N) / N;
      t[static_cast<std::size_t>(m) * N + j] = Complex{std::cos(arg), std::sin(arg)};
    }
  return t;
}

double wavenumber(const Box& b, int m) { return kPi / b.L * signed_index(m, b.N); }

// (i xi)^p along one axis with the Nyquist convention for odd p.
Complex axis_multiplier(const Box& b, int m, int p) {
  if (p == 0) return {1.0, 0.0};
  if (2 * m == b.N && p % 2 == 1) return {0.0, 0.0};
  Complex r{1.0, 0.0};
  const Complex ik{0.0, wavenumber(b, m)};
  for (int i = 0; i < p; ++i) r *= ik;
  return r;
}

// Centred difference along axis a.
Samples central(const Box& b, const Samples& f, int a) {
  Samples out(f.size());
  const double h = b.dx();
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    auto m = unflatten(b, idx);
    auto up = m.j, dn = m.j;
    up[a] = wrap(up[a] + 1, b.N);
    dn[a] = wrap(dn[a] - 1, b.N);
    out[idx] = (f[flatten(b, up)] - f[flatten(b, dn)]) / (2.0 * h);
  }
  return out;
}

Samples laplace(const Box& b, const Samples& f) {
  Samples out(f.size(), 0.0);
  const double h2 = b.dx() * b.dx();
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    auto m = unflatten(b, idx);
    double acc = 0.0;
    for (int a = 0; a < b.n; ++a) {
      auto up = m.j, dn = m.j;
      up[a] = wrap(up[a] + 1, b.N);
      dn[a] = wrap(dn[a] - 1, b.N);
      acc += f[flatten(b, up)] - 2.0 * f[idx] + f[flatten(b, dn)];
    }
    out[idx] = acc / h2;
  }
  return out;
}

double dot(const Samples& a, const Samples& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// -Lap_h p = rhs on the mean-free subspace.
Samples poisson_cg(const Box& b, Samples rhs) {
  double mean = 0.0;
  for (double v : rhs) mean += v;
  mean /= static_cast<double>(rhs.size());
  for (double& v : rhs) v -= mean;

  Samples x(rhs.size(), 0.0), r = rhs, p = rhs;
  double rr = dot(r, r);
  const double stop = 1e-30 * std::max(1.0, dot(rhs, rhs));
  for (std::size_t it = 0; it < 20 * rhs.size() && rr > stop; ++it) {
    Samples ap = laplace(b, p);
    for (double& v : ap) v = -v;
    const double alpha = rr / dot(p, ap);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
  }
  return x;
}

Samples fd_derivative(const Box& b, Samples f, const std::array<int, 3>& alpha) {
  for (int a = 0; a < b.n; ++a)
    for (int r = 0; r < alpha[a]; ++r) f = central(b, f, a);
  return f;
}

void enumerate(int n, int order, int axis, std::array<int, 3>& cur, std::vector<std::array<int, 3>>& out) {
  if (axis == n - 1) {
    cur[axis] = order;
    out.push_back(cur);
    cur[axis] = 0;
    return;
  }
  for (int p = 0; p <= order; ++p) {
    cur[axis] = p;
    enumerate(n, order - p, axis + 1, cur, out);
  }
  cur[axis] = 0;
}

std::vector<std::array<int, 3>> indices_of_order(int n, int order) {
  std::vector<std::array<int, 3>> out;
  std::array<int, 3> cur{0, 0, 0};
  enumerate(n, order, 0, cur, out);
  return out;
}

}  // namespace

std::size_t Box::size() const {
  std::size_t s = 1;
  for (int a = 0; a < n; ++a) s *= static_cast<std::size_t>(N);
  return s;
}

int signed_index(int m, int N) { return 2 * m >= N ? m - N : m; }

Spectrum direct_forward(const Box& box, const Samples& f) {
  const auto tab = phase_table(box.N, -1);
  Spectrum s{box, std::vector<Complex>(box.size())};
  const double norm = 1.0 / static_cast<double>(box.size());
  for (std::size_t mi = 0; mi < s.c.size(); ++mi) {
    const auto m = unflatten(box, mi);
    Complex acc{0.0, 0.0};
    for (std::size_t ji = 0; ji < f.size(); ++ji) {
      const auto j = unflatten(box, ji);
      Complex e{1.0, 0.0};
      for (int a = 0; a < box.n; ++a) e *= tab[static_cast<std::size_t>(m.j[a]) * box.N + j.j[a]];
      acc += f[ji] * e;
    }
    s.c[mi] = acc * norm;
  }
  return s;
}

Samples direct_inverse(const Spectrum& s, const std::array<int, 3>& alpha) {
  const Box& box = s.box;
  const auto tab = phase_table(box.N, +1);
  std::vector<std::pair<std::size_t, Complex>> terms;
  for (std::size_t mi = 0; mi < s.c.size(); ++mi) {
    if (s.c[mi] == Complex{0.0, 0.0}) continue;
    const auto m = unflatten(box, mi);
    Complex mult{1.0, 0.0};
    for (int a = 0; a < box.n; ++a) mult *= axis_multiplier(box, m.j[a], alpha[a]);
    if (mult != Complex{0.0, 0.0}) terms.emplace_back(mi, mult * s.c[mi]);
  }
  Samples out(box.size(), 0.0);
  for (std::size_t ji = 0; ji < out.size(); ++ji) {
    const auto j = unflatten(box, ji);
    Complex acc{0.0, 0.0};
    for (const auto& [mi, c] : terms) {
      const auto m = unflatten(box, mi);
      Complex e = c;
      for (int a = 0; a < box.n; ++a) e *= tab[static_cast<std::size_t>(m.j[a]) * box.N + j.j[a]];
      acc += e;
    }
    out[ji] = acc.real();
  }
  return out;
}

Samples direct_inverse_modulus(const Spectrum& s) {
  Spectrum t = s;
  for (std::size_t mi = 0; mi < t.c.size(); ++mi) {
    const auto m = unflatten(s.box, mi);
    double k2 = 0.0;
    for (int a = 0; a < s.box.n; ++a) k2 += wavenumber(s.box, m.j[a]) * wavenumber(s.box, m.j[a]);
    t.c[mi] = k2 > 0.0 ? t.c[mi] / std::sqrt(k2) : Complex{0.0, 0.0};
  }
  return direct_inverse(t);
}

std::vector<Spectrum> direct_advect(const std::vector<Spectrum>& a, const std::vector<Spectrum>& b, double fraction) {
  if (a.empty() || a.size() != b.size()) throw std::invalid_argument("direct_advect: component mismatch");
  const Box box = a[0].box;
  const int n = box.n;
  const double cutoff = fraction * (kPi / box.L) * (box.N / 2);

  auto signed_vec = [&](std::size_t mi) {
    const auto m = unflatten(box, mi);
    std::array<int, 3> v{0, 0, 0};
    for (int ax = 0; ax < n; ++ax) v[ax] = signed_index(m.j[ax], box.N);
    return v;
  };
  auto modulus = [&](const std::array<int, 3>& v) {
    double k2 = 0.0;
    for (int ax = 0; ax < n; ++ax) k2 += (kPi / box.L * v[ax]) * (kPi / box.L * v[ax]);
    return std::sqrt(k2);
  };
  auto support = [&](const std::vector<Spectrum>& f) {
    std::vector<std::size_t> idx;
    for (std::size_t mi = 0; mi < f[0].c.size(); ++mi) {
      bool nz = false;
      for (const auto& comp : f) nz = nz || comp.c[mi] != Complex{0.0, 0.0};
      if (nz && modulus(signed_vec(mi)) < cutoff) idx.push_back(mi);
    }
    return idx;
  };

  std::vector<Spectrum> out(b.size(), Spectrum{box, std::vector<Complex>(box.size())});
  const auto sa = support(a);
  const auto sb = support(b);
  for (std::size_t ea : sa) {
    const auto eta = signed_vec(ea);
    for (std::size_t eb : sb) {
      const auto zeta = signed_vec(eb);
      std::array<int, 3> xi{0, 0, 0};
      for (int ax = 0; ax < n; ++ax) xi[ax] = eta[ax] + zeta[ax];
      if (!(modulus(xi) < cutoff)) continue;
      std::array<int, 3> u{0, 0, 0};
      for (int ax = 0; ax < n; ++ax) u[ax] = wrap(xi[ax], box.N);
      const std::size_t oi = flatten(box, u);
      Complex a_dot_ik{0.0, 0.0};
      for (int i = 0; i < n; ++i) a_dot_ik += a[i].c[ea] * Complex{0.0, kPi / box.L * zeta[i]};
      for (std::size_t c = 0; c < b.size(); ++c) out[c].c[oi] += a_dot_ik * b[c].c[eb];
    }
  }
  return out;
}

FdTendency fd_rhs(const Box& box, const Field& lp, const Field& lm, double epsilon, double nu) {
  const int n = box.n;
  if (static_cast<int>(lp.size()) != n || static_cast<int>(lm.size()) != n)
    throw std::invalid_argument("fd_rhs: expected n components");
  const std::size_t np = box.size();

  Samples rhs_p(np, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Samples prod(np);
      for (std::size_t q = 0; q < np; ++q) prod[q] = lm[i][q] * lp[j][q];
      const auto dd = central(box, central(box, prod, j), i);
      for (std::size_t q = 0; q < np; ++q) rhs_p[q] += epsilon * dd[q];
    }
  FdTendency out;
  out.pressure = poisson_cg(box, rhs_p);

  auto one = [&](const Field& self, const Field& other, double dir) {
    Field res(n, Samples(np, 0.0));
    for (int c = 0; c < n; ++c) {
      const auto d1 = central(box, self[c], 0);
      const auto dp = central(box, out.pressure, c);
      const auto lap = laplace(box, self[c]);
      for (std::size_t q = 0; q < np; ++q) res[c][q] = dir * d1[q] - dp[q] + epsilon * nu * lap[q];
      for (int j = 0; j < n; ++j) {
        const auto dj = central(box, self[c], j);
        for (std::size_t q = 0; q < np; ++q) res[c][q] -= epsilon * other[j][q] * dj[q];
      }
    }
    return res;
  };
  out.plus = one(lp, lm, +1.0);
  out.minus = one(lm, lp, -1.0);
  return out;
}

DirectFunctionals direct_functional(const Box& box, const Field& lp, const Field& lm, double t, double s, int k,
                                    double nu, DerivativeMode mode) {
  const int n = box.n;
  const std::size_t np = box.size();
  const double cell = std::pow(box.dx(), n);

  DirectFunctionals r;
  const Field* fields[2] = {&lp, &lm};
  for (int f = 0; f < 2; ++f) {
    const double sign = f == 0 ? 1.0 : -1.0;
    const Field& field = *fields[f];
    std::vector<Spectrum> spectra;
    if (mode == DerivativeMode::direct_dft)
      for (const auto& comp : field) spectra.push_back(direct_forward(box, comp));
    auto deriv = [&](int c, const std::array<int, 3>& alpha) {
      return mode == DerivativeMode::direct_dft ? direct_inverse(spectra[c], alpha)
                                                : fd_derivative(box, field[c], alpha);
    };

    // weights at every grid point
    Samples bracket2(np), den(np);
    for (std::size_t q = 0; q < np; ++q) {
      const auto m = unflatten(box, q);
      double r2 = 0.0;
      for (int a = 0; a < n; ++a) {
        double x = box.x(m.j[a]);
        if (a == 0) x += sign * t;
        r2 += x * x;
      }
      const double x1 = box.x(m.j[0]) - sign * t;
      bracket2[q] = 1.0 + r2;
      den[q] = std::pow(1.0 + x1 * x1, s);
    }

    if (nu > 0.0) {
      for (const auto& comp : field) {
        const auto sp = direct_forward(box, comp);
        const auto inv = direct_inverse_modulus(sp);
        for (double v : inv) r.e_inverse += cell * v * v;
      }
    }

    for (int c = 0; c < n; ++c) {
      const auto& v = field[c];
      for (std::size_t q = 0; q < np; ++q) {
        const double w = std::pow(bracket2[q], s);
        r.e_zeroth += cell * w * v[q] * v[q];
        r.W += cell * w * v[q] * v[q] / den[q];
        r.D += cell * v[q] * v[q];
      }
      // first-order gradient term of D
      for (int j = 0; j < n; ++j) {
        std::array<int, 3> e{0, 0, 0};
        e[j] = 1;
        const auto d = deriv(c, e);
        for (std::size_t q = 0; q < np; ++q) r.D += cell * std::pow(bracket2[q], s) * d[q] * d[q];
      }
      for (int order = 1; order <= k; ++order) {
        for (const auto& alpha : indices_of_order(n, order)) {
          const auto d = deriv(c, alpha);
          double e_sum = 0.0, w_sum = 0.0;
          for (std::size_t q = 0; q < np; ++q) {
            const double w = std::pow(bracket2[q], 2.0 * s);
            e_sum += w * d[q] * d[q];
            w_sum += w * d[q] * d[q] / den[q];
          }
          r.E += cell * e_sum;
          r.W += cell * w_sum;
          for (int j = 0; j < n; ++j) {
            auto beta = alpha;
            beta[j] += 1;
            const auto dj = deriv(c, beta);
            for (std::size_t q = 0; q < np; ++q) r.D += cell * std::pow(bracket2[q], 2.0 * s) * dj[q] * dj[q];
          }
        }
      }
    }
  }
  r.E += r.e_zeroth + (nu > 0.0 ? r.e_inverse : 0.0);
  return r;
}

double quad_q(double y, double s, double tol) {
  if (y == 0.0) return 0.0;
  if (y < 0.0) return -quad_q(-y, s, tol);
  auto f = [s](double tau) { return std::pow(1.0 + tau * tau, -s); };
  // unit panels keep the recursion shallow for large y
  double acc = 0.0;
  double a = 0.0;
  while (a < y) {
    const double b = std::min(y, a + 1.0);
    acc += adaptive_simpson(f, a, b, tol / std::max(1.0, std::ceil(y)));
    a = b;
  }
  return acc;
}

double quad_q_infinity(double s, double tol) {
  if (!(s > 0.5)) throw std::invalid_argument("q(infinity) diverges for s <= 1/2");
  const double p = 1.0 / (2.0 * s - 1.0);
  // tau = v^{-p} maps [1, inf) onto (0, 1]; the Jacobian cancels the v-power exactly
  auto tail = [s, p](double v) { return p * std::pow(1.0 + std::pow(v, 2.0 * p), -s); };
  return quad_q(1.0, s, 0.5 * tol) + adaptive_simpson(tail, 0.0, 1.0, 0.5 * tol);
}

}  // namespace alfven::oracle
