#pragma once

// Slow reference implementations. Nothing here touches Grid, FFTW or the
// spectral field type; inputs and outputs are plain sample/coefficient arrays.

#include <array>
#include <complex>
#include <vector>

namespace alfven::oracle {

using Complex = std::complex<double>;

struct OracleTolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  /// Expected convergence order under grid refinement (0 when exact).
  double grid_order = 0.0;
};

/// Periodic box [-L, L)^n with N points per axis; samples are row-major.
struct Box {
  int n = 2;
  int N = 32;
  double L = 16.0;

  double dx() const { return 2.0 * L / N; }
  double x(int j) const { return -L + j * dx(); }
  std::size_t size() const;
};

using Samples = std::vector<double>;
using Field = std::vector<Samples>;  // one entry per component

/// Full-spectrum coefficients, row-major over unsigned indices 0..N-1 per axis.
/// Index m maps to the signed wavenumber (m <= N/2 ? m : m - N) * pi / L.
struct Spectrum {
  Box box;
  std::vector<Complex> c;
};

/// Signed wave index of unsigned index m (Nyquist maps to -N/2).
int signed_index(int m, int N);

/// fhat = N^{-n} sum_j f_j exp(-i xi (x_j + L)) by direct summation.
Spectrum direct_forward(const Box& box, const Samples& f);
/// Samples of d^alpha of the trigonometric interpolant. Odd derivatives of
/// Nyquist terms vanish at the grid points.
Samples direct_inverse(const Spectrum& s, const std::array<int, 3>& alpha = {0, 0, 0});
/// Samples of |grad|^{-1} f (zero mode dropped).
Samples direct_inverse_modulus(const Spectrum& s);

/// (a . grad) b by brute-force convolution over all coefficient pairs with
/// inputs and output restricted to |xi| < fraction * k_max.
std::vector<Spectrum> direct_advect(const std::vector<Spectrum>& a, const std::vector<Spectrum>& b,
                                    double fraction = 2.0 / 3.0);

struct FdTendency {
  Field plus;
  Field minus;
  Samples pressure;
};

/// Second-order centred finite differences for every derivative; pressure from
/// a conjugate-gradient solve of the 5/7-point Laplacian.
FdTendency fd_rhs(const Box& box, const Field& lp, const Field& lm, double epsilon, double nu);

enum class DerivativeMode { direct_dft, finite_difference };

struct DirectFunctionals {
  double E = 0.0;
  double W = 0.0;
  double D = 0.0;
  double e_inverse = 0.0;
  double e_zeroth = 0.0;
};

/// Nested-loop quadrature of E_k, W_k, D_k at fast time t.
DirectFunctionals direct_functional(const Box& box, const Field& lp, const Field& lm, double t, double s, int k,
                                    double nu, DerivativeMode mode);

/// q(y) = int_0^y (1 + tau^2)^{-s} dtau by adaptive Simpson.
double quad_q(double y, double s, double tol = 1e-12);
/// q(infinity), with the tail mapped onto [0, 1] by tau = v^{-1/(2s-1)}.
double quad_q_infinity(double s, double tol = 1e-12);

/// Adaptive Simpson on [a, b].
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol);

}  // namespace alfven::oracle

#include "oracle_impl.hpp"
