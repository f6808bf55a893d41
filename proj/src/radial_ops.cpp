#include "ep/radial_ops.hpp"

#include <fftw3.h>

#include <cmath>
#include <fmt/format.h>

#include "ep/errors.hpp"

namespace ep {

std::vector<double> RadialGrid::centers() const {
  std::vector<double> r(num_cells);
  for (std::size_t j = 0; j < num_cells; ++j) r[j] = this->r(j);
  return r;
}

void RadialGrid::validate() const {
  if (num_cells < 64) throw ConfigError(fmt::format("num_cells must be >= 64 (got {})", num_cells));
  if (!(r_max > 0.0)) throw ConfigError(fmt::format("r_max must be > 0 (got {})", r_max));
}

namespace {

// Builds f extended by `ng` ghost cells on each side: mirror-parity about the
// r=0 face on the left, constant `far` on the right.
void extend(const std::vector<double>& f, int parity, double far, std::size_t ng,
            std::vector<double>& g) {
  const std::size_t n = f.size();
  g.resize(n + 2 * ng);
  for (std::size_t k = 0; k < ng; ++k) g[ng - 1 - k] = parity * f[k];
  for (std::size_t j = 0; j < n; ++j) g[ng + j] = f[j];
  for (std::size_t k = 0; k < ng; ++k) g[ng + n + k] = far;
}

} // namespace

void deriv4(const std::vector<double>& f, Parity parity, double far, double dr,
            std::vector<double>& out) {
  const std::size_t n = f.size();
  static thread_local std::vector<double> g;
  extend(f, static_cast<int>(parity), far, 2, g);
  out.resize(n);
  const double inv = 1.0 / (12.0 * dr);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = (-g[j + 4] + 8.0 * g[j + 3] - 8.0 * g[j + 1] + g[j]) * inv;
  }
}

std::vector<double> deriv4(const std::vector<double>& f, Parity parity, double far, double dr) {
  std::vector<double> out;
  deriv4(f, parity, far, dr, out);
  return out;
}

double max_abs_deriv4(const std::vector<double>& f, Parity parity, double far, double dr) {
  static thread_local std::vector<double> d;
  deriv4(f, parity, far, dr, d);
  double m = 0.0;
  for (double x : d) m = std::max(m, std::abs(x));
  return m;
}

void add_dissipation6(const std::vector<double>& f, Parity parity, double far,
                      double coef, std::vector<double>& accum) {
  const std::size_t n = f.size();
  static thread_local std::vector<double> g;
  extend(f, static_cast<int>(parity), far, 3, g);
  const double scale = coef / 64.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d6 = g[j] - 6.0 * g[j + 1] + 15.0 * g[j + 2] - 20.0 * g[j + 3] +
                      15.0 * g[j + 4] - 6.0 * g[j + 5] + g[j + 6];
    accum[j] += scale * d6;
  }
}

ProfileFilter::ProfileFilter(std::size_t n) : n_(n) {
  const std::size_t m = 2 * n;
  real_buf_ = fftw_alloc_real(m);
  auto* cb = fftw_alloc_complex(m / 2 + 1);
  cplx_buf_ = cb;
  plan_fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(m), real_buf_, cb, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_c2r_1d(static_cast<int>(m), cb, real_buf_, FFTW_ESTIMATE);
}

ProfileFilter::~ProfileFilter() {
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  fftw_free(real_buf_);
  fftw_free(static_cast<fftw_complex*>(cplx_buf_));
}

void ProfileFilter::apply(std::vector<double>& f, Parity parity, double base) const {
  const std::size_t n = n_;
  const std::size_t m = 2 * n;
  const int sign = static_cast<int>(parity);
  for (std::size_t j = 0; j < n; ++j) real_buf_[j] = f[j] - base;
  for (std::size_t j = 0; j < n; ++j) real_buf_[n + j] = sign * (f[n - 1 - j] - base);
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  auto* cb = static_cast<fftw_complex*>(cplx_buf_);
  const double frac = 2.0 / 3.0;
  for (std::size_t q = 0; q <= m / 2; ++q) {
    const double theta = static_cast<double>(q) / static_cast<double>(n);
    double sig = 1.0;
    if (theta > frac) {
      const double x = (theta - frac) / (1.0 - frac);
      sig = std::exp(-36.0 * std::pow(x, 8.0));
    }
    cb[q][0] *= sig;
    cb[q][1] *= sig;
  }
  fftw_execute(static_cast<fftw_plan>(plan_bwd_));
  const double norm = 1.0 / static_cast<double>(m);
  for (std::size_t j = 0; j < n; ++j) f[j] = base + real_buf_[j] * norm;
}

} // namespace ep
