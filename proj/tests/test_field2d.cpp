#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ep/errors.hpp"
#include "ep/field2d.hpp"

using namespace ep;

namespace {

ScalarField2D gaussian(const CartesianGrid& g, double cx, double cy, double w) {
  ScalarField2D f = make_scalar(g);
  for (std::size_t iy = 0; iy < g.n; ++iy)
    for (std::size_t ix = 0; ix < g.n; ++ix) {
      const double x = g.coord(ix) - cx, y = g.coord(iy) - cy;
      f.v[iy * g.n + ix] = std::exp(-(x * x + y * y) / (w * w));
    }
  return f;
}

double sup_diff(const VectorField2D& a, const VectorField2D& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    d = std::max(d, std::abs(a.x[i] - b.x[i]));
    d = std::max(d, std::abs(a.y[i] - b.y[i]));
  }
  return d;
}

} // namespace

TEST_CASE("grid validation") {
  CartesianGrid g{100, 10.0}; // not a power of two
  CHECK_THROWS_AS(g.validate(), ConfigError);
  CartesianGrid g2{8, 10.0}; // too small
  CHECK_THROWS_AS(g2.validate(), ConfigError);
  CartesianGrid g3{64, 0.0};
  CHECK_THROWS_AS(g3.validate(), ConfigError);
  CartesianGrid ok{64, 10.0};
  ok.validate();
  CHECK(ok.spacing() == doctest::Approx(10.0 / 64.0));
  CHECK(ok.coord(32) == doctest::Approx(0.0));
}

TEST_CASE("spectral gradient of a gaussian matches the analytic gradient") {
  CartesianGrid g{128, 24.0};
  const double w = 1.5;
  const ScalarField2D f = gaussian(g, 0.3, -0.7, w);
  const VectorField2D grad = gradient(f);
  double err = 0.0;
  for (std::size_t iy = 0; iy < g.n; ++iy)
    for (std::size_t ix = 0; ix < g.n; ++ix) {
      const double x = g.coord(ix) - 0.3, y = g.coord(iy) + 0.7;
      const double v = std::exp(-(x * x + y * y) / (w * w));
      err = std::max(err, std::abs(grad.x[iy * g.n + ix] + 2.0 * x / (w * w) * v));
      err = std::max(err, std::abs(grad.y[iy * g.n + ix] + 2.0 * y / (w * w) * v));
    }
  CHECK(err <= 1e-10);
}

TEST_CASE("curl of a gradient vanishes; divergence matches the Laplacian") {
  CartesianGrid g{128, 24.0};
  const ScalarField2D f = gaussian(g, 0.0, 0.0, 1.3);
  const VectorField2D grad = gradient(f);
  CHECK(curl2d(grad).sup() <= 1e-10);
  const ScalarField2D lap = divergence(grad);
  // analytic Laplacian of exp(-r^2/w^2): (4 r^2 / w^4 - 4 / w^2) f
  double err = 0.0;
  const double w = 1.3;
  for (std::size_t iy = 0; iy < g.n; ++iy)
    for (std::size_t ix = 0; ix < g.n; ++ix) {
      const double x = g.coord(ix), y = g.coord(iy);
      const double r2 = x * x + y * y;
      const double v = std::exp(-r2 / (w * w));
      err = std::max(err, std::abs(lap.v[iy * g.n + ix] -
                                   (4.0 * r2 / (w * w * w * w) - 4.0 / (w * w)) * v));
    }
  CHECK(err <= 1e-8);
}

TEST_CASE("poisson solve inverts the forward Laplacian on zero-mean data") {
  CartesianGrid g{128, 24.0};
  ScalarField2D rho = gaussian(g, 1.0, 0.0, 1.2);
  const ScalarField2D neg = gaussian(g, -1.0, 0.5, 1.2);
  for (std::size_t i = 0; i < rho.v.size(); ++i) rho.v[i] -= neg.v[i];
  const double m = rho.mean();
  for (double& x : rho.v) x -= m; // exact zero mean
  const ScalarField2D phi = poisson_solve(rho);
  const ScalarField2D back = divergence(gradient(phi));
  double err = 0.0;
  for (std::size_t i = 0; i < rho.v.size(); ++i) err = std::max(err, std::abs(back.v[i] - rho.v[i]));
  CHECK(err <= 1e-9 * rho.sup());
  CHECK(std::abs(phi.mean()) <= 1e-12); // zero-mean gauge
}

TEST_CASE("poisson solve rejects non-neutral charge") {
  CartesianGrid g{64, 16.0};
  const ScalarField2D rho = gaussian(g, 0.0, 0.0, 1.0);
  CHECK_THROWS_AS(poisson_solve(rho), NeutralityError);
}

TEST_CASE("projection fixes gradients and annihilates divergence-free fields") {
  CartesianGrid g{128, 24.0};
  const VectorField2D grad = gradient(gaussian(g, 0.4, 0.1, 1.4));
  CHECK(sup_diff(grad, riesz_apply(grad)) <= 1e-10 * grad.sup());

  // perpendicular gradient (divergence-free) is annihilated
  VectorField2D perp = make_vector(g);
  perp.x = grad.y;
  for (std::size_t i = 0; i < perp.y.size(); ++i) perp.y[i] = -grad.x[i];
  CHECK(riesz_apply(perp).sup() <= 1e-10 * perp.sup());
}

TEST_CASE("projection is idempotent on generic fields") {
  CartesianGrid g{128, 24.0};
  VectorField2D eta = make_vector(g);
  // gradient plus swirl: generic mixed field
  const VectorField2D grad = gradient(gaussian(g, 0.0, 0.0, 1.6));
  for (std::size_t iy = 0; iy < g.n; ++iy)
    for (std::size_t ix = 0; ix < g.n; ++ix) {
      const std::size_t i = iy * g.n + ix;
      const double x = g.coord(ix), y = g.coord(iy);
      const double a = std::exp(-(x * x + y * y) / 2.0);
      eta.x[i] = grad.x[i] - 0.5 * y * a;
      eta.y[i] = grad.y[i] + 0.5 * x * a;
    }
  const VectorField2D once = riesz_apply(eta);
  const VectorField2D twice = riesz_apply(once);
  CHECK(sup_diff(once, twice) <= 1e-12 * once.sup());
  CHECK(curl2d(once).sup() <= 1e-10 * once.sup()); // output is curl-free
}

TEST_CASE("round trip through the raw half-spectrum is the identity") {
  CartesianGrid g{64, 16.0};
  const ScalarField2D f = gaussian(g, -0.2, 0.9, 1.1);
  const ScalarField2D back = backward_c2r(forward_r2c(f), g);
  double err = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) err = std::max(err, std::abs(back.v[i] - f.v[i]));
  CHECK(err <= 1e-14);
}

TEST_CASE("wavenumber layout") {
  CartesianGrid g{64, 16.0};
  CHECK(wavenumber(g, 0) == 0.0);
  CHECK(wavenumber(g, 1) == doctest::Approx(2.0 * 3.14159265358979323846 / 16.0));
  CHECK(wavenumber(g, 63) == doctest::Approx(-2.0 * 3.14159265358979323846 / 16.0));
  CHECK(wavenumber(g, 32) == doctest::Approx(32.0 * 2.0 * 3.14159265358979323846 / 16.0));
}
