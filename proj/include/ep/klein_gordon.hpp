#pragma once
#include <cstddef>
#include <vector>

#include "ep/field2d.hpp"
#include "ep/params.hpp"
#include "ep/radial_ops.hpp"

namespace ep {

struct KGState {
  ScalarField2D w;   // field
  ScalarField2D wt;  // time derivative
};

// Exact spectral propagator of w_tt - Lap w + m0 w = 0 on the periodic box:
//   w_hat(t) = cos(om t) w0_hat + sin(om t)/om w1_hat,  om = sqrt(m0 + |k|^2).
// Exact in time to roundoff; the only discretization is the box itself.
// Throws DomainTooSmallError when the light cone from the numerical support
// of the data would reach the box boundary by time t (wrap-around guard).
KGState kg_linear_propagate(const ScalarField2D& w0, const ScalarField2D& w1, double t, double m0);

// Discrete energy Int (wt^2 + |grad w|^2 + m0 w^2) dx via Parseval.
double kg_energy(const KGState& s, double m0);

struct DecayFit {
  double exponent = 0.0;   // fitted alpha in sup ~ C (1+t)^(-alpha)
  double amplitude = 0.0;  // fitted C
  double residual = 0.0;   // RMS residual of the log-log fit
  double t_min = 0.0, t_max = 0.0;
};

// Least-squares fit of log(sup_norm) against log(1+t); exponent = -slope.
// Requires positive norms, increasing times, and at least 8 samples.
DecayFit fit_decay_exponent(const std::vector<double>& times, const std::vector<double>& sup_norms);

struct NonlocalComparison {
  VectorField2D local_term;     // -m0 (m - h(m)) v embedded radially
  VectorField2D nonlocal_term;  // -m0 R[embed((m - h(m)) v)]
  double rel_diff = 0.0;        // sup difference / sup of the local term
};

// Compares the curl-free-projection form of the field term of the second-order
// system with its pointwise (local) replacement, for radial profiles m, v
// sampled at radii i * dr. For radial data the two agree to discretization
// error; adding a swirl component breaks the agreement.
NonlocalComparison kg_nonlocal_term(const std::vector<double>& m, const std::vector<double>& v,
                                    double dr, const PhysicalParams& params,
                                    const DerivedConstants& consts, const CartesianGrid& grid);

// Quadratic right-hand side of the second-order form of the normalized
// system, evaluated in radial coordinates with the local field term:
//   rhs_m = div[v v_r + c m m_r] - d/dt[v m_r + c m div v] + m0 h(m)
//   rhs_v = d/dr[v m_r + c m div v] - d/dt[v v_r + c m m_r] - m0 (m - h(m)) v
// with c = (gamma-1)/2; the d/dt brackets are expanded by the product rule
// using the supplied dm/dt, dv/dt profiles.
void kg_quadratic_rhs(const std::vector<double>& m, const std::vector<double>& v,
                      const std::vector<double>& dm_dt, const std::vector<double>& dv_dt,
                      const RadialGrid& grid, const PhysicalParams& params,
                      const DerivedConstants& consts,
                      std::vector<double>& rhs_m, std::vector<double>& rhs_v);

} // namespace ep
