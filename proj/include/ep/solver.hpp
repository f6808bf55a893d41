#pragma once
#include <memory>
#include <string>
#include <vector>

#include "ep/params.hpp"
#include "ep/radial_ops.hpp"

namespace ep {

enum class FieldMode { dynamic, gauss, off };
enum class Formulation { primal, normalized };

// Radial profiles of the fluid-field system at one time: density n > 0,
// radial velocity u (odd about r=0), radial electric field E (odd).
struct PrimalState {
  double time = 0.0;
  std::vector<double> n, u, E;
};

// Rescaled variables: m (even), v = u/c0 (odd), g (odd); time is the
// rescaled tau = c0 * t_phys.
struct NormalizedState {
  double time = 0.0;
  std::vector<double> m, v, g;
};

struct SolverConfig {
  PhysicalParams params;
  RadialGrid grid;
  double cfl = 0.4;
  double t_end = 0.0;
  FieldMode field_mode = FieldMode::dynamic;
  bool filter = true;
  std::size_t diagnostics_stride = 10;
  Formulation formulation = Formulation::primal;
  // Strength of the order-6 grid-mode dissipation applied to the odd fields
  // (u and E, or v and g). Applied only when the field coupling is active:
  // the pure-Euler mode (field_mode = off) runs undissipated so that genuine
  // gradient steepening reaches the blow-up monitor.
  double dissipation = 0.2;

  void validate() const;
  double effective_dissipation() const {
    return field_mode == FieldMode::off ? 0.0 : dissipation;
  }
};

struct Diagnostics {
  double time = 0.0;
  double excess_mass = 0.0;      // 2 pi Int (n - n0) r dr
  double energy = 0.0;           // kinetic + internal + field energy
  double sup_density_pert = 0.0; // max |n - n0|
  double sup_velocity = 0.0;     // max |u|
  double max_grad_u = 0.0;       // 4th-order difference gradients
  double max_grad_n = 0.0;
  double sup_E = 0.0;
};

enum class RunStatus { completed, blowup_detected, nan_detected, vacuum };
const char* to_string(RunStatus s);

struct RunResult {
  RunStatus status = RunStatus::completed;
  std::vector<Diagnostics> series;
  PrimalState final_primal;          // always populated (transformed if normalized)
  NormalizedState final_normalized;  // populated for normalized runs
  double stop_time = 0.0;
  double trip_threshold = 0.0;       // blow-up monitor threshold used
  std::size_t steps_taken = 0;
};

// Radial Gauss law: E(r) = (kappa / r) Int_0^r (n(s) - n0) s ds by cumulative
// midpoint quadrature with a half-cell end correction. Throws NeutralityError
// if the net charge is not ~0.
std::vector<double> gauss_field(const std::vector<double>& n, const RadialGrid& grid,
                                const PhysicalParams& params);

// Time derivative of the primal system in radial coordinates:
//   dn/dt = -d(nu)/dr - nu/r
//   du/dt = -u du/dr - (A gamma/m_e) n^(gamma-2) dn/dr + (e/m_e) E
//   dE/dt = -kappa n u           (dynamic mode)
// In gauss mode E is reconstructed from n each evaluation; in off mode E = 0.
void primal_rhs(const PrimalState& s, const SolverConfig& cfg,
                std::vector<double>& dn, std::vector<double>& du, std::vector<double>& dE);

// Time derivative of the normalized system (time variable tau = c0 t):
//   dm/dt = -div v - v dm/dr - ((gamma-1)/2) m div v
//   dv/dt = -dm/dr - v dv/dr - ((gamma-1)/2) m dm/dr + (e/m_e) g / c0^2
//   dg/dt = -kappa n0 (1 + m - h(m)) v
// with div v = dv/dr + v/r; the field coefficients reduce to 1 in paper units.
void normalized_rhs(const NormalizedState& s, const SolverConfig& cfg, const DerivedConstants& c,
                    std::vector<double>& dm, std::vector<double>& dv, std::vector<double>& dg);

// dt = cfl * dr / max_j(|u_j| + c(n_j)), c(n) = sqrt(A gamma n^(gamma-1)/m_e).
double cfl_dt(const std::vector<double>& n, const std::vector<double>& u,
              const RadialGrid& grid, const PhysicalParams& params, double cfl);

// Integrates the state by one classical RK4 step of size dt, then applies the
// optional high-mode filter and a conservative correction that restores the
// r-weighted density sum exactly (the cell-centered origin quadrature
// otherwise leaks excess mass at O(dr^2); see README). Throws
// InstabilityError if the step produces non-finite values.
void step_rk4(PrimalState& s, double dt, const SolverConfig& cfg, const ProfileFilter* filter);
void step_rk4(NormalizedState& s, double dt, const SolverConfig& cfg, const DerivedConstants& c,
              const ProfileFilter* filter);

// Sup norms of the 4th-order difference gradients of u and n.
struct ShockMonitor {
  double max_grad_u = 0.0;
  double max_grad_n = 0.0;
};
ShockMonitor shock_monitor(const PrimalState& s, const RadialGrid& grid, const PhysicalParams& params);

Diagnostics compute_diagnostics(const PrimalState& s, const RadialGrid& grid,
                                const PhysicalParams& params);

// Integrates to cfg.t_end or halts on the blow-up monitor
// (max|du/dr| > max(50 x initial, 0.5/dr)), NaN, or vacuum. Diagnostics are
// recorded at t=0, every diagnostics_stride steps, and at the final time.
RunResult run(const SolverConfig& cfg, const PrimalState& initial);
RunResult run(const SolverConfig& cfg, const NormalizedState& initial);

} // namespace ep
