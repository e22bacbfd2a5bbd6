#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <new>
#include <vector>

namespace alfven {

using Complex = std::complex<double>;

/// Allocator returning FFTW-aligned storage so arrays can be passed to the
/// new-array execute interface of plans built once per grid.
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t n);
  void deallocate(T* p, std::size_t) noexcept;
  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

void* fftw_aligned_alloc(std::size_t bytes);
void fftw_aligned_free(void* p) noexcept;

template <class T>
T* FftwAllocator<T>::allocate(std::size_t n) {
  if (n == 0) return nullptr;
  void* p = fftw_aligned_alloc(n * sizeof(T));
  if (!p) throw std::bad_alloc();
  return static_cast<T*>(p);
}

template <class T>
void FftwAllocator<T>::deallocate(T* p, std::size_t) noexcept {
  fftw_aligned_free(p);
}

using RealArray = std::vector<double, FftwAllocator<double>>;
using ComplexArray = std::vector<Complex, FftwAllocator<Complex>>;

/// Periodic box [-L, L)^n sampled with dims[a] points per axis.
struct GridSpec {
  std::vector<int> dims{128, 128};
  double half_length = 16.0;
  double dealias_fraction = 2.0 / 3.0;

  int ndim() const { return static_cast<int>(dims.size()); }
  double dx() const { return 2.0 * half_length / dims.at(0); }
  /// Throws ConfigError when any invariant is violated.
  void validate() const;
  bool operator==(const GridSpec&) const = default;
};

/// Immutable grid: wavenumber tables, dealias mask and FFT plans.
///
/// Spectral storage is the real-to-complex half spectrum (last axis holds
/// dims[n-1]/2 + 1 entries). Coefficients are Fourier-series coefficients:
///   f(x_j) = sum_xi fhat(xi) exp(i xi . (x_j + L)),  x_j = -L + j dx,
/// so fhat = (1/N) * DFT(f) with N the number of grid points. With this
/// convention the discrete L2 inner product sum_j f g dx^n equals
/// (2L)^n * sum over the full spectrum of Re(fhat conj(ghat)).
class Grid {
 public:
  explicit Grid(const GridSpec& spec);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  static std::shared_ptr<const Grid> make(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int ndim() const { return spec_.ndim(); }
  double half_length() const { return spec_.half_length; }
  double dx() const { return spec_.dx(); }
  double cell_volume() const { return cell_volume_; }
  /// pi / L, the fundamental wavenumber.
  double k0() const { return k0_; }
  std::size_t physical_size() const { return physical_size_; }
  std::size_t spectral_size() const { return spectral_size_; }
  const std::array<int, 3>& spectral_dims() const { return spectral_dims_; }

  /// Signed integer wave index along `axis` (Nyquist reported as -N/2).
  int wave_index(std::size_t idx, int axis) const { return wave_index_[axis][idx]; }
  double wavenumber(std::size_t idx, int axis) const { return k0_ * wave_index_[axis][idx]; }
  bool nyquist(std::size_t idx, int axis) const { return 2 * wave_index_[axis][idx] == -spec_.dims[axis]; }
  bool any_nyquist(std::size_t idx) const { return any_nyquist_[idx] != 0; }
  double k2(std::size_t idx) const { return k2_[idx]; }
  /// Inside the dealiasing ball |xi| < fraction * k_max.
  bool kept(std::size_t idx) const { return kept_[idx] != 0; }
  /// Multiplicity of the coefficient in the full spectrum (1 or 2).
  double parseval_weight(std::size_t idx) const { return parseval_weight_[idx]; }

  /// Physical coordinate of grid point `idx` along `axis` (unwrapped, in [-L, L)).
  double coordinate(std::size_t idx, int axis) const;
  /// Index of the grid point along each axis.
  std::array<int, 3> point_index(std::size_t idx) const;

  /// Physical samples -> normalized half-spectrum coefficients.
  void forward(const double* in, Complex* out) const;
  /// Half-spectrum coefficients -> physical samples (input left untouched).
  void inverse(const Complex* in, double* out) const;

  /// Multiplier of the derivative d^alpha at spectral index idx.
  /// Odd orders vanish on Nyquist modes; even orders use (i k_N)^m.
  Complex derivative_multiplier(std::size_t idx, const std::array<int, 3>& alpha) const;

 private:
  GridSpec spec_;
  double cell_volume_ = 0.0;
  double k0_ = 0.0;
  std::size_t physical_size_ = 0;
  std::size_t spectral_size_ = 0;
  std::array<int, 3> spectral_dims_{1, 1, 1};
  std::array<std::vector<int>, 3> wave_index_;
  std::vector<unsigned char> any_nyquist_;
  std::vector<double> k2_;
  std::vector<unsigned char> kept_;
  std::vector<double> parseval_weight_;
  void* plan_forward_ = nullptr;
  void* plan_inverse_ = nullptr;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace alfven
