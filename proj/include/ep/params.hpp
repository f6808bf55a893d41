#pragma once
#include <vector>

#include "ep/errors.hpp"

namespace ep {

// Physical constants of the gamma-law Euler-Poisson system
//   dn/dt + div(n u) = 0
//   du/dt + (u.grad)u + (A gamma / m_e) n^(gamma-2) grad n = (e/m_e) grad phi
//   Lap phi = kappa (n - n0)
// The "paper units" preset sets A = m_e = e = kappa = 1.
struct PhysicalParams {
  double gamma = 3.0;          // adiabatic index, > 1
  double entropy_const_A = 1.0; // pressure constant, > 0
  double charge_e = 1.0;
  double mass_me = 1.0;
  double n0 = 1.0;             // equilibrium density, > 0
  double kappa = 1.0;          // Poisson coupling (4*pi*e in unscaled units)

  void validate() const;       // throws ConfigError on invariant violation
};

// Derived constants: sound speed and the Klein-Gordon mass parameter.
struct DerivedConstants {
  double c0 = 0.0; // sqrt(A gamma n0^(gamma-1) / m_e)
  double m0 = 0.0; // n0 / c0^2
};

DerivedConstants derive_constants(const PhysicalParams& p);

// Density/velocity change of variables:
//   m = (2/(gamma-1)) ((n/n0)^((gamma-1)/2) - 1),  v = u / c0.
// The time rescale tau = c0 * t is applied by callers comparing trajectories.
void to_normalized(const std::vector<double>& n, const std::vector<double>& u,
                   const PhysicalParams& p, const DerivedConstants& c,
                   std::vector<double>& m, std::vector<double>& v);

// Exact inverse: n = n0 ((gamma-1)/2 m + 1)^(2/(gamma-1)), u = c0 v.
void from_normalized(const std::vector<double>& m, const std::vector<double>& v,
                     const PhysicalParams& p, const DerivedConstants& c,
                     std::vector<double>& n, std::vector<double>& u);

// h(m) = m - [((gamma-1)/2 m + 1)^(2/(gamma-1)) - 1]; h(0)=0, h = O(m^2),
// identically zero for gamma = 3.
double h_of_m(double m, double gamma);

// Vacuum guard threshold relative to n0.
inline constexpr double vacuum_rel_threshold = 1e-10;

} // namespace ep
