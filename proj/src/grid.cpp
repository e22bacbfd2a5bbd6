#include "grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace alfven {

namespace {

// The FFTW planner is not thread-safe; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void* fftw_aligned_alloc(std::size_t bytes) { return fftw_malloc(bytes); }
void fftw_aligned_free(void* p) noexcept { fftw_free(p); }

void GridSpec::validate() const {
  if (dims.size() != 2 && dims.size() != 3)
    throw ConfigError("grid must have 2 or 3 axes, got " + std::to_string(dims.size()));
  for (int d : dims) {
    if (d < 8 || d % 2 != 0)
      throw ConfigError("grid dims must be even and >= 8, got " + std::to_string(d));
  }
  for (int d : dims) {
    if (d != dims[0]) throw ConfigError("grid spacing must be identical on every axis (square/cubic box)");
  }
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw ConfigError("half_length must be positive");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw ConfigError("dealias_fraction must lie in (0, 1]");
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  const int n = spec_.ndim();
  k0_ = std::numbers::pi / spec_.half_length;
  cell_volume_ = std::pow(spec_.dx(), n);

  physical_size_ = 1;
  for (int d : spec_.dims) physical_size_ *= static_cast<std::size_t>(d);
  for (int a = 0; a < n; ++a) spectral_dims_[a] = spec_.dims[a];
  spectral_dims_[n - 1] = spec_.dims[n - 1] / 2 + 1;
  spectral_size_ = 1;
  for (int a = 0; a < n; ++a) spectral_size_ *= static_cast<std::size_t>(spectral_dims_[a]);

  for (int a = 0; a < 3; ++a) wave_index_[a].assign(spectral_size_, 0);
  any_nyquist_.assign(spectral_size_, 0);
  k2_.assign(spectral_size_, 0.0);
  kept_.assign(spectral_size_, 0);
  parseval_weight_.assign(spectral_size_, 1.0);

  const double kmax = k0_ * (spec_.dims[0] / 2);
  const double cutoff = spec_.dealias_fraction * kmax;
  const int last = n - 1;
  for (std::size_t idx = 0; idx < spectral_size_; ++idx) {
    std::size_t rem = idx;
    std::array<int, 3> j{0, 0, 0};
    for (int a = n - 1; a >= 0; --a) {
      j[a] = static_cast<int>(rem % spectral_dims_[a]);
      rem /= spectral_dims_[a];
    }
    double k2 = 0.0;
    bool nyq = false;
    for (int a = 0; a < n; ++a) {
      const int N = spec_.dims[a];
      int m = j[a];
      if (a != last) {
        if (m >= N / 2) m -= N;
      } else if (m == N / 2) {
        m = -N / 2;
      }
      wave_index_[a][idx] = m;
      if (2 * m == -N) nyq = true;
      const double k = k0_ * m;
      k2 += k * k;
    }
    k2_[idx] = k2;
    any_nyquist_[idx] = nyq ? 1 : 0;
    kept_[idx] = std::sqrt(k2) < cutoff ? 1 : 0;
    const int jl = j[last];
    const int Nl = spec_.dims[last];
    parseval_weight_[idx] = (jl == 0 || 2 * jl == Nl) ? 1.0 : 2.0;
  }

  RealArray rbuf(physical_size_);
  ComplexArray cbuf(spectral_size_);
  std::array<int, 3> dims{1, 1, 1};
  for (int a = 0; a < n; ++a) dims[a] = spec_.dims[a];
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_forward_ = fftw_plan_dft_r2c(n, dims.data(), rbuf.data(), reinterpret_cast<fftw_complex*>(cbuf.data()),
                                    FFTW_MEASURE);
  plan_inverse_ = fftw_plan_dft_c2r(n, dims.data(), reinterpret_cast<fftw_complex*>(cbuf.data()), rbuf.data(),
                                    FFTW_MEASURE);
  if (!plan_forward_ || !plan_inverse_) throw ConfigError("FFTW planning failed");
}

Grid::~Grid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_forward_) fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  if (plan_inverse_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
}

std::shared_ptr<const Grid> Grid::make(const GridSpec& spec) { return std::make_shared<const Grid>(spec); }

std::array<int, 3> Grid::point_index(std::size_t idx) const {
  std::array<int, 3> j{0, 0, 0};
  for (int a = ndim() - 1; a >= 0; --a) {
    j[a] = static_cast<int>(idx % spec_.dims[a]);
    idx /= spec_.dims[a];
  }
  return j;
}

double Grid::coordinate(std::size_t idx, int axis) const {
  const auto j = point_index(idx);
  return -spec_.half_length + j[axis] * dx();
}

void Grid::forward(const double* in, Complex* out) const {
  // r2c out-of-place preserves its input.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_forward_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
  const double scale = 1.0 / static_cast<double>(physical_size_);
  for (std::size_t i = 0; i < spectral_size_; ++i) out[i] *= scale;
}

void Grid::inverse(const Complex* in, double* out) const {
  // c2r destroys its input in multi-dimensional transforms.
  thread_local ComplexArray scratch;
  scratch.assign(in, in + spectral_size_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inverse_), reinterpret_cast<fftw_complex*>(scratch.data()), out);
}

Complex Grid::derivative_multiplier(std::size_t idx, const std::array<int, 3>& alpha) const {
  double mag = 1.0;
  int order = 0;
  for (int a = 0; a < ndim(); ++a) {
    const int p = alpha[a];
    if (p == 0) continue;
    if (nyquist(idx, a) && (p % 2 == 1)) return {0.0, 0.0};
    const double k = wavenumber(idx, a);
    for (int r = 0; r < p; ++r) mag *= k;
    order += p;
  }
  switch (order % 4) {
    case 0: return {mag, 0.0};
    case 1: return {0.0, mag};
    case 2: return {-mag, 0.0};
    default: return {0.0, -mag};
  }
}

}  // namespace alfven
