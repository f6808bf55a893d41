#include "ep/embed.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <map>
#include <numbers>

#include "ep/errors.hpp"

namespace ep {

CubicSpline::CubicSpline(const std::vector<double>& values, double dx) : y_(values), dx_(dx) {
  const std::size_t n = y_.size();
  if (n < 4) throw ConfigError("spline needs at least 4 samples");
  if (!(dx > 0.0)) throw ConfigError("spline spacing must be positive");
  // Tridiagonal system m_{i-1} + 4 m_i + m_{i+1} = 6 (y_{i+1} - 2 y_i + y_{i-1}) / dx^2
  // on the interior unknowns, natural ends m_0 = m_{n-1} = 0; Thomas algorithm.
  m_.assign(n, 0.0);
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double rhs = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (dx * dx);
    const double denom = 4.0 - ((i == 1) ? 0.0 : c[i - 1]);
    c[i] = 1.0 / denom;
    d[i] = (rhs - ((i == 1) ? 0.0 : d[i - 1])) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = d[i] - c[i] * m_[i + 1];
    if (i == 1) break;
  }
}

double CubicSpline::operator()(double x) const {
  if (x < 0.0 || x > x_max()) return 0.0;
  const std::size_t n = y_.size();
  std::size_t i = std::min(static_cast<std::size_t>(x / dx_), n - 2);
  const double a = (static_cast<double>(i + 1) * dx_ - x) / dx_;
  const double b = (x - static_cast<double>(i) * dx_) / dx_;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * dx_ * dx_ / 6.0;
}

namespace {

CubicSpline checked_spline(const std::vector<double>& f, double dr, const CartesianGrid& grid,
                           bool require_zero_origin) {
  grid.validate();
  if (!(dr > 0.0)) throw ConfigError("radial sample spacing must be positive");
  double sup = 0.0;
  for (double x : f) sup = std::max(sup, std::abs(x));
  if (require_zero_origin && sup > 0.0 && std::abs(f.front()) > 1e-8 * sup)
    throw PreconditionError(fmt::format(
        "radial vector profile must vanish at the origin (f(0) = {}, sup = {})", f.front(), sup));
  const double r_last = dr * static_cast<double>(f.size() - 1);
  const double half_diag = 0.5 * grid.box * std::numbers::sqrt2;
  if (r_last < half_diag && sup > 0.0 && std::abs(f.back()) > 1e-12 * sup)
    throw DomainTooSmallError(fmt::format(
        "radial samples end at r = {} < half-diagonal {} without decaying below 1e-12 of sup",
        r_last, half_diag));
  return CubicSpline(f, dr);
}

} // namespace

VectorField2D embed_radial(const std::vector<double>& f, double dr, const CartesianGrid& grid) {
  const CubicSpline s = checked_spline(f, dr, grid, true);
  VectorField2D out = make_vector(grid);
  const std::size_t n = grid.n;
  for (std::size_t iy = 0; iy < n; ++iy) {
    const double y = grid.coord(iy);
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double x = grid.coord(ix);
      const double rho = std::hypot(x, y);
      if (rho == 0.0) continue;
      const double val = s(rho) / rho;
      out.x[iy * n + ix] = val * x;
      out.y[iy * n + ix] = val * y;
    }
  }
  return out;
}

ScalarField2D embed_radial_scalar(const std::vector<double>& f, double dr,
                                  const CartesianGrid& grid) {
  const CubicSpline s = checked_spline(f, dr, grid, false);
  ScalarField2D out = make_scalar(grid);
  const std::size_t n = grid.n;
  for (std::size_t iy = 0; iy < n; ++iy) {
    const double y = grid.coord(iy);
    for (std::size_t ix = 0; ix < n; ++ix) {
      out.v[iy * n + ix] = s(std::hypot(grid.coord(ix), y));
    }
  }
  return out;
}

RadialExtract extract_radial(const VectorField2D& eta) {
  eta.grid.validate();
  const std::size_t n = eta.grid.n;
  const double h = eta.grid.spacing();
  const long origin = static_cast<long>(n / 2); // node at coordinate 0
  struct Ring {
    double sum = 0.0, sumsq = 0.0;
    std::size_t count = 0;
  };
  std::map<long, Ring> rings;
  for (std::size_t iy = 0; iy < n; ++iy) {
    const long dy = static_cast<long>(iy) - origin;
    for (std::size_t ix = 0; ix < n; ++ix) {
      const long dx = static_cast<long>(ix) - origin;
      const long s = dx * dx + dy * dy;
      if (s == 0) continue;
      const double rho = std::sqrt(static_cast<double>(s)) * h;
      const double radial = (eta.x[iy * n + ix] * (static_cast<double>(dx) * h) +
                             eta.y[iy * n + ix] * (static_cast<double>(dy) * h)) /
                            rho;
      Ring& ring = rings[s];
      ring.sum += radial;
      ring.sumsq += radial * radial;
      ring.count += 1;
    }
  }
  const double sup = eta.sup();
  RadialExtract out;
  out.radius.reserve(rings.size());
  out.profile.reserve(rings.size());
  for (const auto& [s, ring] : rings) {
    const double mean = ring.sum / static_cast<double>(ring.count);
    out.radius.push_back(std::sqrt(static_cast<double>(s)) * h);
    out.profile.push_back(mean);
    if (sup > 0.0 && ring.count > 1) {
      const double var =
          std::max(0.0, ring.sumsq / static_cast<double>(ring.count) - mean * mean);
      out.asymmetry = std::max(out.asymmetry, std::sqrt(var) / sup);
    }
  }
  return out;
}

} // namespace ep
