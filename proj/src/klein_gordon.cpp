#include "ep/klein_gordon.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "ep/embed.hpp"
#include "ep/errors.hpp"

namespace ep {

namespace {

// Radius of the numerical support of a field: largest |x| with |f| > tol*sup.
double support_radius(const ScalarField2D& f, double tol) {
  const double sup = f.sup();
  if (sup == 0.0) return 0.0;
  const std::size_t n = f.grid.n;
  double r = 0.0;
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      if (std::abs(f.v[iy * n + ix]) > tol * sup)
        r = std::max(r, std::hypot(f.grid.coord(ix), f.grid.coord(iy)));
    }
  }
  return r;
}

} // namespace

KGState kg_linear_propagate(const ScalarField2D& w0, const ScalarField2D& w1, double t, double m0) {
  if (!(m0 > 0.0)) throw ConfigError(fmt::format("mass parameter must be > 0 (got {})", m0));
  const CartesianGrid& g = w0.grid;
  g.validate();
  // Wrap-around guard: unit propagation speed plus the data's support radius
  // must stay inside the half-box for the requested time.
  const double r0 = std::max(support_radius(w0, 1e-8), support_radius(w1, 1e-8));
  if (r0 + std::abs(t) > 0.5 * g.box)
    throw DomainTooSmallError(fmt::format(
        "data support radius {} plus horizon {} exceeds half-box {}; enlarge the box",
        r0, std::abs(t), 0.5 * g.box));

  auto s0 = forward_r2c(w0);
  auto s1 = forward_r2c(w1);
  const std::size_t n = g.n, nc = g.n / 2 + 1;
  std::vector<std::complex<double>> sw(s0.size()), swt(s0.size());
  for (std::size_t iy = 0; iy < n; ++iy) {
    const double ky = wavenumber(g, iy);
    for (std::size_t ix = 0; ix < nc; ++ix) {
      const double kx = wavenumber(g, ix);
      const double om = std::sqrt(m0 + kx * kx + ky * ky);
      const double c = std::cos(om * t), s = std::sin(om * t);
      const auto a = s0[iy * nc + ix], b = s1[iy * nc + ix];
      sw[iy * nc + ix] = c * a + (s / om) * b;
      swt[iy * nc + ix] = -om * s * a + c * b;
    }
  }
  KGState out;
  out.w = backward_c2r(sw, g);
  out.wt = backward_c2r(swt, g);
  return out;
}

double kg_energy(const KGState& s, double m0) {
  const VectorField2D grad = gradient(s.w);
  const double h = s.w.grid.spacing();
  double e = 0.0;
  for (std::size_t i = 0; i < s.w.v.size(); ++i) {
    e += s.wt.v[i] * s.wt.v[i] + grad.x[i] * grad.x[i] + grad.y[i] * grad.y[i] +
         m0 * s.w.v[i] * s.w.v[i];
  }
  return e * h * h;
}

DecayFit fit_decay_exponent(const std::vector<double>& times,
                            const std::vector<double>& sup_norms) {
  if (times.size() != sup_norms.size()) throw ConfigError("times and sup_norms must have equal length");
  if (times.size() < 8) throw ConfigError("decay fit needs at least 8 samples");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(sup_norms[i] > 0.0))
      throw ConfigError(fmt::format("sup_norm at index {} is nonpositive ({})", i, sup_norms[i]));
    if (i > 0 && !(times[i] > times[i - 1]))
      throw ConfigError("times must be strictly increasing");
  }
  const std::size_t n = times.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log1p(times[i]);
    const double y = std::log(sup_norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nn = static_cast<double>(n);
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / nn;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(sup_norms[i]) - (slope * std::log1p(times[i]) + intercept);
    ss += r * r;
  }
  DecayFit fit;
  fit.exponent = -slope;
  fit.amplitude = std::exp(intercept);
  fit.residual = std::sqrt(ss / nn);
  fit.t_min = times.front();
  fit.t_max = times.back();
  return fit;
}

NonlocalComparison kg_nonlocal_term(const std::vector<double>& m, const std::vector<double>& v,
                                    double dr, const PhysicalParams& params,
                                    const DerivedConstants& consts, const CartesianGrid& grid) {
  if (m.size() != v.size()) throw ConfigError("profiles m and v must have equal length");
  std::vector<double> q(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    q[i] = (m[i] - h_of_m(m[i], params.gamma)) * v[i];
  const VectorField2D embedded = embed_radial(q, dr, grid);

  NonlocalComparison out;
  out.local_term = embedded;
  out.nonlocal_term = riesz_apply(embedded);
  const double scale = -consts.m0;
  for (std::size_t i = 0; i < embedded.x.size(); ++i) {
    out.local_term.x[i] *= scale;
    out.local_term.y[i] *= scale;
    out.nonlocal_term.x[i] *= scale;
    out.nonlocal_term.y[i] *= scale;
  }
  const double sup_local = out.local_term.sup();
  double sup_diff = 0.0;
  for (std::size_t i = 0; i < embedded.x.size(); ++i) {
    sup_diff = std::max(sup_diff, std::abs(out.local_term.x[i] - out.nonlocal_term.x[i]));
    sup_diff = std::max(sup_diff, std::abs(out.local_term.y[i] - out.nonlocal_term.y[i]));
  }
  if (sup_local == 0.0) {
    if (sup_diff > 1e-14)
      throw InstabilityError("projection of a zero field returned a nonzero result");
    out.rel_diff = 0.0;
  } else {
    out.rel_diff = sup_diff / sup_local;
  }
  return out;
}

void kg_quadratic_rhs(const std::vector<double>& m, const std::vector<double>& v,
                      const std::vector<double>& dm_dt, const std::vector<double>& dv_dt,
                      const RadialGrid& grid, const PhysicalParams& params,
                      const DerivedConstants& consts,
                      std::vector<double>& rhs_m, std::vector<double>& rhs_v) {
  const std::size_t N = m.size();
  const double dr = grid.dr();
  const double c = 0.5 * (params.gamma - 1.0);

  const auto m_r = deriv4(m, Parity::even, 0.0, dr);
  const auto v_r = deriv4(v, Parity::odd, 0.0, dr);
  const auto dm_r = deriv4(dm_dt, Parity::even, 0.0, dr);
  const auto dv_r = deriv4(dv_dt, Parity::odd, 0.0, dr);

  std::vector<double> A(N), B(N), divv(N), div_dv(N);
  for (std::size_t j = 0; j < N; ++j) {
    const double r = grid.r(j);
    divv[j] = v_r[j] + v[j] / r;
    div_dv[j] = dv_r[j] + dv_dt[j] / r;
    A[j] = v[j] * v_r[j] + c * m[j] * m_r[j];              // odd profile
    B[j] = v[j] * m_r[j] + c * m[j] * divv[j];             // even profile
  }
  const auto A_r = deriv4(A, Parity::odd, 0.0, dr);
  const auto B_r = deriv4(B, Parity::even, 0.0, dr);

  rhs_m.resize(N);
  rhs_v.resize(N);
  for (std::size_t j = 0; j < N; ++j) {
    const double r = grid.r(j);
    const double h = h_of_m(m[j], params.gamma);
    const double dB_dt = dv_dt[j] * m_r[j] + v[j] * dm_r[j] +
                         c * (dm_dt[j] * divv[j] + m[j] * div_dv[j]);
    const double dA_dt = dv_dt[j] * v_r[j] + v[j] * dv_r[j] +
                         c * (dm_dt[j] * m_r[j] + m[j] * dm_r[j]);
    rhs_m[j] = (A_r[j] + A[j] / r) - dB_dt + consts.m0 * h;
    rhs_v[j] = B_r[j] - dA_dt - consts.m0 * (m[j] - h) * v[j];
  }
}

} // namespace ep
