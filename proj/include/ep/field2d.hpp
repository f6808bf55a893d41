#pragma once
#include <complex>
#include <cstddef>
#include <vector>

namespace ep {

// Square periodic grid centered at the origin: node coordinates
// x_i = -L/2 + i*h, h = L/n. Used as a numerical stand-in for the plane for
// fields decaying well inside the box.
struct CartesianGrid {
  std::size_t n = 0;     // points per side, power of two, >= 16
  double box = 0.0;      // physical side length

  double spacing() const { return box / static_cast<double>(n); }
  double coord(std::size_t i) const { return -0.5 * box + static_cast<double>(i) * spacing(); }
  std::size_t size() const { return n * n; }
  void validate() const; // throws ConfigError
};

// Row-major [iy][ix] storage, ix fastest.
struct ScalarField2D {
  CartesianGrid grid;
  std::vector<double> v;

  double& at(std::size_t ix, std::size_t iy) { return v[iy * grid.n + ix]; }
  double at(std::size_t ix, std::size_t iy) const { return v[iy * grid.n + ix]; }
  double sup() const;
  double mean() const;
};

struct VectorField2D {
  CartesianGrid grid;
  std::vector<double> x, y;

  double sup() const; // max over components
};

ScalarField2D make_scalar(const CartesianGrid& g);
VectorField2D make_vector(const CartesianGrid& g);

// Spectral (Fourier-symbol) differential operators on the periodic box.
VectorField2D gradient(const ScalarField2D& f);
ScalarField2D divergence(const VectorField2D& eta);
ScalarField2D curl2d(const VectorField2D& eta); // d(eta_y)/dx - d(eta_x)/dy

// Solves Lap(phi) = rho spectrally with the k=0 mode set to zero (zero-mean
// gauge). Requires |mean(rho)| <= 1e-8 * sup|rho|; throws NeutralityError.
ScalarField2D poisson_solve(const ScalarField2D& rho);

// Curl-free (Helmholtz) projection R[eta] = grad Lap^{-1} (div eta), Fourier
// symbol k (k . eta_hat) / |k|^2 with the k=0 mode mapped to 0.
VectorField2D riesz_apply(const VectorField2D& eta);

// Raw half-spectrum access (r2c layout, n x (n/2+1), row-major over ky).
std::vector<std::complex<double>> forward_r2c(const ScalarField2D& f);
ScalarField2D backward_c2r(const std::vector<std::complex<double>>& spec, const CartesianGrid& g);
// Signed wavenumber along either axis for index i in [0, n).
double wavenumber(const CartesianGrid& g, std::size_t i);

} // namespace ep
