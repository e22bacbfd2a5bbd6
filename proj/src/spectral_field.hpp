#pragma once

#include <array>
#include <vector>

#include "grid.hpp"

namespace alfven {

/// Multi-component field stored as half-spectrum Fourier coefficients.
/// Scalars (pressure, stream functions) are one-component fields.
class SpectralVectorField {
 public:
  SpectralVectorField() = default;
  SpectralVectorField(GridPtr grid, int components);

  const GridPtr& grid() const { return grid_; }
  int components() const { return static_cast<int>(comps_.size()); }
  bool empty() const { return !grid_; }

  ComplexArray& operator[](int c) { return comps_[c]; }
  const ComplexArray& operator[](int c) const { return comps_[c]; }

  bool is_dealiased() const { return dealiased_; }
  void set_dealiased(bool v) { dealiased_ = v; }

  SpectralVectorField& operator+=(const SpectralVectorField& o);
  SpectralVectorField& operator-=(const SpectralVectorField& o);
  SpectralVectorField& operator*=(double s);
  /// this += a * x
  void axpy(double a, const SpectralVectorField& x);
  void set_zero();

  friend SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b) { return a += b; }
  friend SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b) { return a -= b; }
  friend SpectralVectorField operator*(double s, SpectralVectorField a) { return a *= s; }

 private:
  GridPtr grid_;
  std::vector<ComplexArray> comps_;
  bool dealiased_ = false;
};

/// Physical-space samples, row-major over the grid.
struct PhysicalField {
  GridPtr grid;
  std::vector<RealArray> comps;

  PhysicalField() = default;
  PhysicalField(GridPtr g, int components);
  int components() const { return static_cast<int>(comps.size()); }
  /// Euclidean magnitude at each grid point.
  RealArray magnitude() const;
};

/// Throws ConfigError unless both fields live on the same grid with equal component counts.
void require_compatible(const SpectralVectorField& a, const SpectralVectorField& b, const char* what);

PhysicalField transform_to_physical(const SpectralVectorField& f);
SpectralVectorField transform_to_spectral(const PhysicalField& f);

/// d^order / dx_axis^order.
SpectralVectorField partial_derivative(const SpectralVectorField& f, int axis, int order);
/// Mixed derivative d^alpha.
SpectralVectorField derivative(const SpectralVectorField& f, const std::array<int, 3>& alpha);
SpectralVectorField gradient(const SpectralVectorField& scalar);
SpectralVectorField divergence(const SpectralVectorField& f);
SpectralVectorField laplacian(const SpectralVectorField& f);

/// Largest coefficient magnitude of the spectral divergence.
double max_abs_divergence(const SpectralVectorField& f);

/// Helmholtz-Leray projection onto divergence-free fields. The zero mode and
/// every mode carrying a Nyquist index are set to zero.
SpectralVectorField leray_project(const SpectralVectorField& f);

/// |grad|^{-1}: divide by |xi|; zero mode maps to zero. Throws DomainError when
/// the input zero mode exceeds 1e-10 (field not mean-free).
SpectralVectorField inverse_modulus_gradient(const SpectralVectorField& f);

/// Zero every coefficient outside the dealiasing ball.
SpectralVectorField dealias(const SpectralVectorField& f);

/// Dealiased (a . grad) b. Inputs and output are truncated to the 2/3 ball.
SpectralVectorField advect(const SpectralVectorField& a, const SpectralVectorField& b);

/// Dealiased pointwise product of component i of a and component j of b.
SpectralVectorField product(const SpectralVectorField& a, int i, const SpectralVectorField& b, int j);

/// Discrete L2 inner product sum_x f.g dx^n, evaluated through Parseval.
double inner_product(const SpectralVectorField& f, const SpectralVectorField& g);
double norm_squared(const SpectralVectorField& f);

/// Largest |f_hat - g_hat| over all coefficients and components.
double max_coefficient_difference(const SpectralVectorField& f, const SpectralVectorField& g);
double max_coefficient(const SpectralVectorField& f);

}  // namespace alfven
