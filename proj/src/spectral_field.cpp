#include "spectral_field.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace alfven {

SpectralVectorField::SpectralVectorField(GridPtr grid, int components) : grid_(std::move(grid)) {
  comps_.assign(components, ComplexArray(grid_->spectral_size(), Complex{0.0, 0.0}));
}

SpectralVectorField& SpectralVectorField::operator+=(const SpectralVectorField& o) {
  require_compatible(*this, o, "field addition");
  for (int c = 0; c < components(); ++c) {
    auto& a = comps_[c];
    const auto& b = o.comps_[c];
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  }
  dealiased_ = dealiased_ && o.dealiased_;
  return *this;
}

SpectralVectorField& SpectralVectorField::operator-=(const SpectralVectorField& o) {
  require_compatible(*this, o, "field subtraction");
  for (int c = 0; c < components(); ++c) {
    auto& a = comps_[c];
    const auto& b = o.comps_[c];
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  }
  dealiased_ = dealiased_ && o.dealiased_;
  return *this;
}

SpectralVectorField& SpectralVectorField::operator*=(double s) {
  for (auto& a : comps_)
    for (auto& v : a) v *= s;
  return *this;
}

void SpectralVectorField::axpy(double a, const SpectralVectorField& x) {
  require_compatible(*this, x, "axpy");
  for (int c = 0; c < components(); ++c) {
    auto& y = comps_[c];
    const auto& xc = x.comps_[c];
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * xc[i];
  }
  dealiased_ = dealiased_ && x.dealiased_;
}

void SpectralVectorField::set_zero() {
  for (auto& a : comps_) std::fill(a.begin(), a.end(), Complex{0.0, 0.0});
}

PhysicalField::PhysicalField(GridPtr g, int components) : grid(std::move(g)) {
  comps.assign(components, RealArray(grid->physical_size(), 0.0));
}

RealArray PhysicalField::magnitude() const {
  RealArray out(grid->physical_size(), 0.0);
  for (const auto& c : comps)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i] * c[i];
  for (auto& v : out) v = std::sqrt(v);
  return out;
}

void require_compatible(const SpectralVectorField& a, const SpectralVectorField& b, const char* what) {
  if (a.empty() || b.empty()) throw ConfigError(std::string(what) + ": empty field");
  if (a.grid() != b.grid() && !(a.grid()->spec() == b.grid()->spec()))
    throw ConfigError(std::string(what) + ": grid mismatch");
  if (a.components() != b.components()) throw ConfigError(std::string(what) + ": component count mismatch");
}

namespace {

void require_vector(const SpectralVectorField& f, const char* what) {
  if (f.empty()) throw ConfigError(std::string(what) + ": empty field");
  if (f.components() != f.grid()->ndim())
    throw ConfigError(std::string(what) + ": expected " + std::to_string(f.grid()->ndim()) + " components");
}

}  // namespace

PhysicalField transform_to_physical(const SpectralVectorField& f) {
  PhysicalField out(f.grid(), f.components());
  for (int c = 0; c < f.components(); ++c) f.grid()->inverse(f[c].data(), out.comps[c].data());
  return out;
}

SpectralVectorField transform_to_spectral(const PhysicalField& f) {
  if (!f.grid) throw ConfigError("transform_to_spectral: empty field");
  SpectralVectorField out(f.grid, f.components());
  for (int c = 0; c < f.components(); ++c) {
    if (f.comps[c].size() != f.grid->physical_size())
      throw ConfigError("transform_to_spectral: sample count does not match grid");
    f.grid->forward(f.comps[c].data(), out[c].data());
  }
  return out;
}

SpectralVectorField derivative(const SpectralVectorField& f, const std::array<int, 3>& alpha) {
  const auto& g = *f.grid();
  for (int a = 0; a < 3; ++a) {
    if (alpha[a] < 0 || (a >= g.ndim() && alpha[a] != 0)) throw ConfigError("derivative: invalid multi-index");
  }
  SpectralVectorField out(f.grid(), f.components());
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    const Complex m = g.derivative_multiplier(i, alpha);
    for (int c = 0; c < f.components(); ++c) out[c][i] = m * f[c][i];
  }
  out.set_dealiased(f.is_dealiased());
  return out;
}

SpectralVectorField partial_derivative(const SpectralVectorField& f, int axis, int order) {
  if (axis < 0 || axis >= f.grid()->ndim()) throw ConfigError("partial_derivative: axis out of range");
  if (order < 1) throw ConfigError("partial_derivative: order must be positive");
  std::array<int, 3> alpha{0, 0, 0};
  alpha[axis] = order;
  return derivative(f, alpha);
}

SpectralVectorField gradient(const SpectralVectorField& scalar) {
  if (scalar.components() != 1) throw ConfigError("gradient: expected a scalar field");
  const auto& g = *scalar.grid();
  SpectralVectorField out(scalar.grid(), g.ndim());
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    for (int a = 0; a < g.ndim(); ++a) {
      const double k = g.nyquist(i, a) ? 0.0 : g.wavenumber(i, a);
      out[a][i] = Complex{0.0, k} * scalar[0][i];
    }
  }
  out.set_dealiased(scalar.is_dealiased());
  return out;
}

SpectralVectorField divergence(const SpectralVectorField& f) {
  require_vector(f, "divergence");
  const auto& g = *f.grid();
  SpectralVectorField out(f.grid(), 1);
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    Complex s{0.0, 0.0};
    for (int a = 0; a < g.ndim(); ++a) {
      const double k = g.nyquist(i, a) ? 0.0 : g.wavenumber(i, a);
      s += Complex{0.0, k} * f[a][i];
    }
    out[0][i] = s;
  }
  return out;
}

SpectralVectorField laplacian(const SpectralVectorField& f) {
  const auto& g = *f.grid();
  SpectralVectorField out(f.grid(), f.components());
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    const double k2 = g.k2(i);
    for (int c = 0; c < f.components(); ++c) out[c][i] = -k2 * f[c][i];
  }
  out.set_dealiased(f.is_dealiased());
  return out;
}

double max_abs_divergence(const SpectralVectorField& f) {
  const auto d = divergence(f);
  double m = 0.0;
  for (const auto& v : d[0]) m = std::max(m, std::abs(v));
  return m;
}

SpectralVectorField leray_project(const SpectralVectorField& f) {
  require_vector(f, "leray_project");
  const auto& g = *f.grid();
  const int n = g.ndim();
  SpectralVectorField out(f.grid(), n);
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    if (i == 0 || g.any_nyquist(i)) continue;
    Complex dot{0.0, 0.0};
    for (int a = 0; a < n; ++a) dot += g.wavenumber(i, a) * f[a][i];
    const Complex s = dot / g.k2(i);
    for (int a = 0; a < n; ++a) out[a][i] = f[a][i] - g.wavenumber(i, a) * s;
  }
  out.set_dealiased(f.is_dealiased());
  return out;
}

SpectralVectorField inverse_modulus_gradient(const SpectralVectorField& f) {
  const auto& g = *f.grid();
  for (int c = 0; c < f.components(); ++c) {
    if (std::abs(f[c][0]) > 1e-10)
      throw DomainError("inverse_modulus_gradient: field is not mean-free (zero mode " +
                        std::to_string(std::abs(f[c][0])) + ")");
  }
  SpectralVectorField out(f.grid(), f.components());
  for (std::size_t i = 1; i < g.spectral_size(); ++i) {
    const double inv = 1.0 / std::sqrt(g.k2(i));
    for (int c = 0; c < f.components(); ++c) out[c][i] = inv * f[c][i];
  }
  out.set_dealiased(f.is_dealiased());
  return out;
}

SpectralVectorField dealias(const SpectralVectorField& f) {
  const auto& g = *f.grid();
  SpectralVectorField out = f;
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    if (g.kept(i)) continue;
    for (int c = 0; c < f.components(); ++c) out[c][i] = Complex{0.0, 0.0};
  }
  out.set_dealiased(true);
  return out;
}

SpectralVectorField advect(const SpectralVectorField& a, const SpectralVectorField& b) {
  require_vector(a, "advect");
  require_vector(b, "advect");
  require_compatible(a, b, "advect");
  const auto& g = *a.grid();
  const int n = g.ndim();
  const std::size_t np = g.physical_size();

  const auto a_phys = transform_to_physical(dealias(a));
  const auto b_cut = dealias(b);
  PhysicalField acc(a.grid(), n);
  RealArray tmp(np);
  for (int j = 0; j < n; ++j) {
    const auto db = partial_derivative(b_cut, j, 1);
    for (int c = 0; c < n; ++c) {
      g.inverse(db[c].data(), tmp.data());
      const auto& aj = a_phys.comps[j];
      auto& out = acc.comps[c];
      for (std::size_t p = 0; p < np; ++p) out[p] += aj[p] * tmp[p];
    }
  }
  return dealias(transform_to_spectral(acc));
}

SpectralVectorField product(const SpectralVectorField& a, int i, const SpectralVectorField& b, int j) {
  if (a.grid()->spec() != b.grid()->spec()) throw ConfigError("product: grid mismatch");
  const auto& g = *a.grid();
  RealArray pa(g.physical_size()), pb(g.physical_size());
  const auto ac = dealias(a);
  const auto bc = dealias(b);
  g.inverse(ac[i].data(), pa.data());
  g.inverse(bc[j].data(), pb.data());
  for (std::size_t p = 0; p < pa.size(); ++p) pa[p] *= pb[p];
  SpectralVectorField out(a.grid(), 1);
  g.forward(pa.data(), out[0].data());
  return dealias(out);
}

double inner_product(const SpectralVectorField& f, const SpectralVectorField& h) {
  require_compatible(f, h, "inner_product");
  const auto& g = *f.grid();
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    for (std::size_t i = 0; i < g.spectral_size(); ++i) {
      s += g.parseval_weight(i) * (f[c][i].real() * h[c][i].real() + f[c][i].imag() * h[c][i].imag());
    }
  }
  return s * std::pow(2.0 * g.half_length(), g.ndim());
}

double norm_squared(const SpectralVectorField& f) { return inner_product(f, f); }

double max_coefficient_difference(const SpectralVectorField& f, const SpectralVectorField& h) {
  require_compatible(f, h, "max_coefficient_difference");
  double m = 0.0;
  for (int c = 0; c < f.components(); ++c)
    for (std::size_t i = 0; i < f[c].size(); ++i) m = std::max(m, std::abs(f[c][i] - h[c][i]));
  return m;
}

double max_coefficient(const SpectralVectorField& f) {
  double m = 0.0;
  for (int c = 0; c < f.components(); ++c)
    for (const auto& v : f[c]) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace alfven
