#include "ep/field2d.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <fmt/format.h>
#include <numbers>

#include "ep/errors.hpp"

namespace ep {

void CartesianGrid::validate() const {
  if (n < 16 || (n & (n - 1)) != 0)
    throw ConfigError(fmt::format("grid points per side must be a power of two >= 16 (got {})", n));
  if (!(box > 0.0)) throw ConfigError(fmt::format("box length must be > 0 (got {})", box));
}

double ScalarField2D::sup() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double ScalarField2D::mean() const {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double VectorField2D::sup() const {
  double m = 0.0;
  for (double a : x) m = std::max(m, std::abs(a));
  for (double a : y) m = std::max(m, std::abs(a));
  return m;
}

ScalarField2D make_scalar(const CartesianGrid& g) {
  ScalarField2D f;
  f.grid = g;
  f.v.assign(g.size(), 0.0);
  return f;
}

VectorField2D make_vector(const CartesianGrid& g) {
  VectorField2D f;
  f.grid = g;
  f.x.assign(g.size(), 0.0);
  f.y.assign(g.size(), 0.0);
  return f;
}

namespace {

// One r2c/c2r transform pair for an n x n real field.
class Spectral {
 public:
  explicit Spectral(const CartesianGrid& g) : g_(g), n_(g.n), nc_(g.n / 2 + 1) {
    real_ = fftw_alloc_real(n_ * n_);
    cplx_ = fftw_alloc_complex(n_ * nc_);
    fwd_ = fftw_plan_dft_r2c_2d(static_cast<int>(n_), static_cast<int>(n_), real_, cplx_,
                                FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_2d(static_cast<int>(n_), static_cast<int>(n_), cplx_, real_,
                                FFTW_ESTIMATE);
  }
  ~Spectral() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(real_);
    fftw_free(cplx_);
  }

  std::vector<std::complex<double>> forward(const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) real_[i] = v[i];
    fftw_execute(fwd_);
    std::vector<std::complex<double>> out(n_ * nc_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {cplx_[i][0], cplx_[i][1]};
    return out;
  }

  std::vector<double> backward(const std::vector<std::complex<double>>& c) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      cplx_[i][0] = c[i].real();
      cplx_[i][1] = c[i].imag();
    }
    fftw_execute(bwd_);
    const double norm = 1.0 / static_cast<double>(n_ * n_);
    std::vector<double> out(n_ * n_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = real_[i] * norm;
    return out;
  }

  // wavenumber along either axis for index i in [0, n)
  double k(std::size_t i) const {
    const double base = 2.0 * std::numbers::pi / g_.box;
    const auto half = n_ / 2;
    const double m = (i <= half) ? static_cast<double>(i)
                                 : static_cast<double>(i) - static_cast<double>(n_);
    return base * m;
  }

  std::size_t n() const { return n_; }
  std::size_t nc() const { return nc_; }

 private:
  CartesianGrid g_;
  std::size_t n_, nc_;
  double* real_;
  fftw_complex* cplx_;
  fftw_plan fwd_, bwd_;
};

} // namespace

VectorField2D gradient(const ScalarField2D& f) {
  f.grid.validate();
  Spectral sp(f.grid);
  auto fh = sp.forward(f.v);
  const std::size_t n = sp.n(), nc = sp.nc();
  std::vector<std::complex<double>> gx(fh.size()), gy(fh.size());
  const std::complex<double> I(0.0, 1.0);
  for (std::size_t iy = 0; iy < n; ++iy) {
    const double ky = (iy == n / 2) ? 0.0 : sp.k(iy); // zero the Nyquist mode of odd symbols
    for (std::size_t ix = 0; ix < nc; ++ix) {
      const double kx = (ix == n / 2) ? 0.0 : sp.k(ix);
      const auto c = fh[iy * nc + ix];
      gx[iy * nc + ix] = I * kx * c;
      gy[iy * nc + ix] = I * ky * c;
    }
  }
  VectorField2D out = make_vector(f.grid);
  out.x = sp.backward(gx);
  out.y = sp.backward(gy);
  return out;
}

ScalarField2D divergence(const VectorField2D& eta) {
  eta.grid.validate();
  Spectral sp(eta.grid);
  auto xh = sp.forward(eta.x);
  auto yh = sp.forward(eta.y);
  const std::size_t n = sp.n(), nc = sp.nc();
  std::vector<std::complex<double>> dh(xh.size());
  const std::complex<double> I(0.0, 1.0);
  for (std::size_t iy = 0; iy < n; ++iy) {
    const double ky = (iy == n / 2) ? 0.0 : sp.k(iy);
    for (std::size_t ix = 0; ix < nc; ++ix) {
      const double kx = (ix == n / 2) ? 0.0 : sp.k(ix);
      dh[iy * nc + ix] = I * (kx * xh[iy * nc + ix] + ky * yh[iy * nc + ix]);
    }
  }
  ScalarField2D out = make_scalar(eta.grid);
  out.v = sp.backward(dh);
  return out;
}

ScalarField2D curl2d(const VectorField2D& eta) {
  eta.grid.validate();
  Spectral sp(eta.grid);
  auto xh = sp.forward(eta.x);
  auto yh = sp.forward(eta.y);
  const std::size_t n = sp.n(), nc = sp.nc();
  std::vector<std::complex<double>> ch(xh.size());
  const std::complex<double> I(0.0, 1.0);
  for (std::size_t iy = 0; iy < n; ++iy) {
    const double ky = (iy == n / 2) ? 0.0 : sp.k(iy);
    for (std::size_t ix = 0; ix < nc; ++ix) {
      const double kx = (ix == n / 2) ? 0.0 : sp.k(ix);
      ch[iy * nc + ix] = I * (kx * yh[iy * nc + ix] - ky * xh[iy * nc + ix]);
    }
  }
  ScalarField2D out = make_scalar(eta.grid);
  out.v = sp.backward(ch);
  return out;
}

ScalarField2D poisson_solve(const ScalarField2D& rho) {
  rho.grid.validate();
  const double m = rho.mean();
  if (std::abs(m) > 1e-8 * rho.sup() && rho.sup() > 0.0)
    throw NeutralityError(
        fmt::format("mean charge {} exceeds neutrality tolerance {} for Poisson inversion", m,
                    1e-8 * rho.sup()));
  Spectral sp(rho.grid);
  auto rh = sp.forward(rho.v);
  const std::size_t n = sp.n(), nc = sp.nc();
  for (std::size_t iy = 0; iy < n; ++iy) {
    const double ky = sp.k(iy);
    for (std::size_t ix = 0; ix < nc; ++ix) {
      const double kx = sp.k(ix);
      const double k2 = kx * kx + ky * ky;
      rh[iy * nc + ix] = (k2 == 0.0) ? 0.0 : rh[iy * nc + ix] / (-k2);
    }
  }
  ScalarField2D out = make_scalar(rho.grid);
  out.v = sp.backward(rh);
  return out;
}

std::vector<std::complex<double>> forward_r2c(const ScalarField2D& f) {
  f.grid.validate();
  Spectral sp(f.grid);
  return sp.forward(f.v);
}

ScalarField2D backward_c2r(const std::vector<std::complex<double>>& spec, const CartesianGrid& g) {
  g.validate();
  Spectral sp(g);
  ScalarField2D out = make_scalar(g);
  out.v = sp.backward(spec);
  return out;
}

double wavenumber(const CartesianGrid& g, std::size_t i) {
  const double base = 2.0 * std::numbers::pi / g.box;
  const double m = (i <= g.n / 2) ? static_cast<double>(i)
                                  : static_cast<double>(i) - static_cast<double>(g.n);
  return base * m;
}

VectorField2D riesz_apply(const VectorField2D& eta) {
  eta.grid.validate();
  Spectral sp(eta.grid);
  auto xh = sp.forward(eta.x);
  auto yh = sp.forward(eta.y);
  const std::size_t n = sp.n(), nc = sp.nc();
  std::vector<std::complex<double>> ox(xh.size()), oy(xh.size());
  for (std::size_t iy = 0; iy < n; ++iy) {
    const double ky = sp.k(iy);
    for (std::size_t ix = 0; ix < nc; ++ix) {
      const double kx = sp.k(ix);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) {
        ox[iy * nc + ix] = 0.0;
        oy[iy * nc + ix] = 0.0;
      } else {
        const auto dot = kx * xh[iy * nc + ix] + ky * yh[iy * nc + ix];
        ox[iy * nc + ix] = kx * dot / k2;
        oy[iy * nc + ix] = ky * dot / k2;
      }
    }
  }
  VectorField2D out = make_vector(eta.grid);
  out.x = sp.backward(ox);
  out.y = sp.backward(oy);
  return out;
}

} // namespace ep
