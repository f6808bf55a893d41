#include "ep/params.hpp"

#include <cmath>
#include <fmt/format.h>

namespace ep {

void PhysicalParams::validate() const {
  if (!(gamma > 1.0))
    throw ConfigError(fmt::format("gamma must be > 1 (got {}); the density transform degenerates at gamma = 1", gamma));
  if (!(n0 > 0.0)) throw ConfigError(fmt::format("n0 must be > 0 (got {})", n0));
  if (!(mass_me > 0.0)) throw ConfigError(fmt::format("mass_me must be > 0 (got {})", mass_me));
  if (!(entropy_const_A > 0.0)) throw ConfigError(fmt::format("entropy_const_A must be > 0 (got {})", entropy_const_A));
  if (!(kappa > 0.0)) throw ConfigError(fmt::format("kappa must be > 0 (got {})", kappa));
}

DerivedConstants derive_constants(const PhysicalParams& p) {
  p.validate();
  DerivedConstants c;
  c.c0 = std::sqrt(p.entropy_const_A * p.gamma * std::pow(p.n0, p.gamma - 1.0) / p.mass_me);
  c.m0 = p.n0 / (c.c0 * c.c0);
  return c;
}

void to_normalized(const std::vector<double>& n, const std::vector<double>& u,
                   const PhysicalParams& p, const DerivedConstants& c,
                   std::vector<double>& m, std::vector<double>& v) {
  const double half_gm1 = 0.5 * (p.gamma - 1.0);
  m.resize(n.size());
  v.resize(u.size());
  for (std::size_t j = 0; j < n.size(); ++j) {
    if (!(n[j] > vacuum_rel_threshold * p.n0))
      throw VacuumError(fmt::format("density {} at index {} is at or below the vacuum guard", n[j], j));
    m[j] = (std::pow(n[j] / p.n0, half_gm1) - 1.0) / half_gm1;
  }
  for (std::size_t j = 0; j < u.size(); ++j) v[j] = u[j] / c.c0;
}

void from_normalized(const std::vector<double>& m, const std::vector<double>& v,
                     const PhysicalParams& p, const DerivedConstants& c,
                     std::vector<double>& n, std::vector<double>& u) {
  const double half_gm1 = 0.5 * (p.gamma - 1.0);
  n.resize(m.size());
  u.resize(v.size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    const double base = half_gm1 * m[j] + 1.0;
    if (!(base > 0.0))
      throw VacuumError(fmt::format("normalized density argument {} at index {} leaves the transform domain", base, j));
    n[j] = p.n0 * std::pow(base, 1.0 / half_gm1);
  }
  for (std::size_t j = 0; j < v.size(); ++j) u[j] = c.c0 * v[j];
}

double h_of_m(double m, double gamma) {
  const double half_gm1 = 0.5 * (gamma - 1.0);
  const double base = half_gm1 * m + 1.0;
  if (!(base > 0.0))
    throw VacuumError(fmt::format("h(m) argument {} outside the transform domain", m));
  return m - (std::pow(base, 1.0 / half_gm1) - 1.0);
}

} // namespace ep
