#include "ep/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "ep/errors.hpp"

namespace ep {

namespace {

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double weighted_density_sum(const std::vector<double>& n, const RadialGrid& grid) {
  double s = 0.0;
  for (std::size_t j = 0; j < n.size(); ++j) s += n[j] * grid.r(j);
  return s * grid.dr();
}

double sum_r(const RadialGrid& grid) {
  double s = 0.0;
  for (std::size_t j = 0; j < grid.num_cells; ++j) s += grid.r(j);
  return s * grid.dr();
}

} // namespace

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup_detected: return "blowup_detected";
    case RunStatus::nan_detected: return "nan_detected";
    case RunStatus::vacuum: return "vacuum";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  params.validate();
  grid.validate();
  if (!(cfl > 0.0 && cfl <= 0.9))
    throw ConfigError(fmt::format("cfl must be in (0, 0.9] (got {})", cfl));
  if (!(t_end > 0.0)) throw ConfigError(fmt::format("t_end must be > 0 (got {})", t_end));
  if (diagnostics_stride == 0) throw ConfigError("diagnostics_stride must be >= 1");
  if (!(dissipation >= 0.0)) throw ConfigError("dissipation must be >= 0");
}

std::vector<double> gauss_field(const std::vector<double>& n, const RadialGrid& grid,
                                const PhysicalParams& params) {
  const double dr = grid.dr();
  double net = 0.0, abs_net = 0.0;
  for (std::size_t j = 0; j < n.size(); ++j) {
    const double q = (n[j] - params.n0) * grid.r(j) * dr;
    net += q;
    abs_net += std::abs(q);
  }
  if (std::abs(net) > 1e-8 * (abs_net + 1e-300))
    throw NeutralityError(fmt::format(
        "net charge {} exceeds neutrality tolerance (total charge scale {})", net, abs_net));
  std::vector<double> E(n.size());
  double cum = 0.0;
  for (std::size_t j = 0; j < n.size(); ++j) {
    const double q = (n[j] - params.n0) * grid.r(j) * dr;
    cum += q;
    // midpoint cumulative sum with half-cell end correction
    E[j] = params.kappa * (cum - 0.5 * q) / grid.r(j);
  }
  return E;
}

namespace {

// Shared scratch for RHS evaluation; single logical thread of control per run.
struct PrimalScratch {
  std::vector<double> ne, ue, flux, dflux, dn_r, du_r, Egauss;
};

void primal_rhs_impl(const std::vector<double>& n, const std::vector<double>& u,
                     const std::vector<double>& E, const SolverConfig& cfg, PrimalScratch& ws,
                     std::vector<double>& dn, std::vector<double>& du, std::vector<double>& dE) {
  const PhysicalParams& p = cfg.params;
  const RadialGrid& grid = cfg.grid;
  const double dr = grid.dr();
  const std::size_t N = n.size();
  dn.resize(N);
  du.resize(N);
  dE.assign(N, 0.0);

  // mass flux n*u with parity ghosts (product of even and odd is odd)
  ws.flux.resize(N);
  for (std::size_t j = 0; j < N; ++j) ws.flux[j] = n[j] * u[j];
  deriv4(ws.flux, Parity::odd, 0.0, dr, ws.dflux);
  deriv4(n, Parity::even, p.n0, dr, ws.dn_r);
  deriv4(u, Parity::odd, 0.0, dr, ws.du_r);

  const double pressure_coef = p.entropy_const_A * p.gamma / p.mass_me;
  const double field_coef = p.charge_e / p.mass_me;
  const std::vector<double>* Eff = &E;
  if (cfg.field_mode == FieldMode::gauss) {
    ws.Egauss = gauss_field(n, grid, p);
    Eff = &ws.Egauss;
  }
  for (std::size_t j = 0; j < N; ++j) {
    dn[j] = -ws.dflux[j] - ws.flux[j] / grid.r(j);
    du[j] = -u[j] * ws.du_r[j] - pressure_coef * std::pow(n[j], p.gamma - 2.0) * ws.dn_r[j];
    if (cfg.field_mode != FieldMode::off) du[j] += field_coef * (*Eff)[j];
  }
  if (cfg.field_mode == FieldMode::dynamic) {
    for (std::size_t j = 0; j < N; ++j) dE[j] = -p.kappa * n[j] * u[j];
  }
  const double sigma = cfg.effective_dissipation();
  if (sigma > 0.0) {
    double cm = 0.0;
    const double sound_coef = p.entropy_const_A * p.gamma / p.mass_me;
    for (std::size_t j = 0; j < N; ++j)
      cm = std::max(cm, std::abs(u[j]) + std::sqrt(sound_coef * std::pow(n[j], p.gamma - 1.0)));
    const double coef = sigma * cm / dr;
    add_dissipation6(u, Parity::odd, 0.0, coef, du);
    if (cfg.field_mode == FieldMode::dynamic) add_dissipation6(E, Parity::odd, 0.0, coef, dE);
  }
}

PrimalScratch& primal_scratch() {
  static thread_local PrimalScratch ws;
  return ws;
}

} // namespace

void primal_rhs(const PrimalState& s, const SolverConfig& cfg,
                std::vector<double>& dn, std::vector<double>& du, std::vector<double>& dE) {
  primal_rhs_impl(s.n, s.u, s.E, cfg, primal_scratch(), dn, du, dE);
  if (!all_finite(dn) || !all_finite(du) || !all_finite(dE))
    throw InstabilityError("non-finite value in primal time derivative");
}

void normalized_rhs(const NormalizedState& s, const SolverConfig& cfg, const DerivedConstants& c,
                    std::vector<double>& dm, std::vector<double>& dv, std::vector<double>& dg) {
  const PhysicalParams& p = cfg.params;
  const RadialGrid& grid = cfg.grid;
  const double dr = grid.dr();
  const std::size_t N = s.m.size();
  const double half_gm1 = 0.5 * (p.gamma - 1.0);
  static thread_local std::vector<double> dm_r, dv_r;
  deriv4(s.m, Parity::even, 0.0, dr, dm_r);
  deriv4(s.v, Parity::odd, 0.0, dr, dv_r);
  dm.resize(N);
  dv.resize(N);
  dg.resize(N);
  // field coefficients reduce to 1 in paper units (e = m_e = kappa = 1)
  const double field_coef = p.charge_e / (p.mass_me * c.c0 * c.c0);
  const double source_coef = p.kappa * p.n0;
  for (std::size_t j = 0; j < N; ++j) {
    const double divv = dv_r[j] + s.v[j] / grid.r(j);
    dm[j] = -divv - s.v[j] * dm_r[j] - half_gm1 * s.m[j] * divv;
    dv[j] = -dm_r[j] - s.v[j] * dv_r[j] - half_gm1 * s.m[j] * dm_r[j] + field_coef * s.g[j];
    dg[j] = -source_coef * (1.0 + s.m[j] - h_of_m(s.m[j], p.gamma)) * s.v[j];
  }
  const double sigma = cfg.effective_dissipation();
  if (sigma > 0.0) {
    double cm = 0.0;
    for (std::size_t j = 0; j < N; ++j)
      cm = std::max(cm, std::abs(s.v[j]) + std::abs(1.0 + half_gm1 * s.m[j]));
    const double coef = sigma * cm / dr;
    add_dissipation6(s.v, Parity::odd, 0.0, coef, dv);
    add_dissipation6(s.g, Parity::odd, 0.0, coef, dg);
  }
  if (!all_finite(dm) || !all_finite(dv) || !all_finite(dg))
    throw InstabilityError("non-finite value in normalized time derivative");
}

double cfl_dt(const std::vector<double>& n, const std::vector<double>& u,
              const RadialGrid& grid, const PhysicalParams& params, double cfl) {
  const double sound_coef = params.entropy_const_A * params.gamma / params.mass_me;
  double cm = 0.0;
  for (std::size_t j = 0; j < n.size(); ++j)
    cm = std::max(cm, std::abs(u[j]) + std::sqrt(sound_coef * std::pow(n[j], params.gamma - 1.0)));
  return cfl * grid.dr() / cm;
}

void step_rk4(PrimalState& s, double dt, const SolverConfig& cfg, const ProfileFilter* filter) {
  const std::size_t N = s.n.size();
  PrimalScratch& ws = primal_scratch();
  std::vector<double> k1n, k1u, k1E, k2n, k2u, k2E, k3n, k3u, k3E, k4n, k4u, k4E;
  std::vector<double> tn(N), tu(N), tE(N);

  const double mass_target = weighted_density_sum(s.n, cfg.grid);

  primal_rhs_impl(s.n, s.u, s.E, cfg, ws, k1n, k1u, k1E);
  for (std::size_t j = 0; j < N; ++j) {
    tn[j] = s.n[j] + 0.5 * dt * k1n[j];
    tu[j] = s.u[j] + 0.5 * dt * k1u[j];
    tE[j] = s.E[j] + 0.5 * dt * k1E[j];
  }
  primal_rhs_impl(tn, tu, tE, cfg, ws, k2n, k2u, k2E);
  for (std::size_t j = 0; j < N; ++j) {
    tn[j] = s.n[j] + 0.5 * dt * k2n[j];
    tu[j] = s.u[j] + 0.5 * dt * k2u[j];
    tE[j] = s.E[j] + 0.5 * dt * k2E[j];
  }
  primal_rhs_impl(tn, tu, tE, cfg, ws, k3n, k3u, k3E);
  for (std::size_t j = 0; j < N; ++j) {
    tn[j] = s.n[j] + dt * k3n[j];
    tu[j] = s.u[j] + dt * k3u[j];
    tE[j] = s.E[j] + dt * k3E[j];
  }
  primal_rhs_impl(tn, tu, tE, cfg, ws, k4n, k4u, k4E);
  const double w = dt / 6.0;
  for (std::size_t j = 0; j < N; ++j) {
    s.n[j] += w * (k1n[j] + 2.0 * k2n[j] + 2.0 * k3n[j] + k4n[j]);
    s.u[j] += w * (k1u[j] + 2.0 * k2u[j] + 2.0 * k3u[j] + k4u[j]);
    s.E[j] += w * (k1E[j] + 2.0 * k2E[j] + 2.0 * k3E[j] + k4E[j]);
  }
  if (cfg.field_mode == FieldMode::gauss) s.E = gauss_field(s.n, cfg.grid, cfg.params);

  if (cfg.filter && filter) {
    filter->apply(s.n, Parity::even, cfg.params.n0);
    filter->apply(s.u, Parity::odd);
    if (cfg.field_mode != FieldMode::off) filter->apply(s.E, Parity::odd);
  }

  // Conservative correction: restore the r-weighted density sum exactly.
  const double mass_now = weighted_density_sum(s.n, cfg.grid);
  const double shift = (mass_target - mass_now) / sum_r(cfg.grid);
  for (std::size_t j = 0; j < N; ++j) s.n[j] += shift;

  s.time += dt;
  if (!all_finite(s.n) || !all_finite(s.u) || !all_finite(s.E))
    throw InstabilityError(fmt::format("non-finite state after step at t = {}", s.time));
}

void step_rk4(NormalizedState& s, double dt, const SolverConfig& cfg, const DerivedConstants& c,
              const ProfileFilter* filter) {
  const std::size_t N = s.m.size();
  std::vector<double> k1m, k1v, k1g, k2m, k2v, k2g, k3m, k3v, k3g, k4m, k4v, k4g;
  NormalizedState t = s;
  normalized_rhs(s, cfg, c, k1m, k1v, k1g);
  for (std::size_t j = 0; j < N; ++j) {
    t.m[j] = s.m[j] + 0.5 * dt * k1m[j];
    t.v[j] = s.v[j] + 0.5 * dt * k1v[j];
    t.g[j] = s.g[j] + 0.5 * dt * k1g[j];
  }
  normalized_rhs(t, cfg, c, k2m, k2v, k2g);
  for (std::size_t j = 0; j < N; ++j) {
    t.m[j] = s.m[j] + 0.5 * dt * k2m[j];
    t.v[j] = s.v[j] + 0.5 * dt * k2v[j];
    t.g[j] = s.g[j] + 0.5 * dt * k2g[j];
  }
  normalized_rhs(t, cfg, c, k3m, k3v, k3g);
  for (std::size_t j = 0; j < N; ++j) {
    t.m[j] = s.m[j] + dt * k3m[j];
    t.v[j] = s.v[j] + dt * k3v[j];
    t.g[j] = s.g[j] + dt * k3g[j];
  }
  normalized_rhs(t, cfg, c, k4m, k4v, k4g);
  const double w = dt / 6.0;
  for (std::size_t j = 0; j < N; ++j) {
    s.m[j] += w * (k1m[j] + 2.0 * k2m[j] + 2.0 * k3m[j] + k4m[j]);
    s.v[j] += w * (k1v[j] + 2.0 * k2v[j] + 2.0 * k3v[j] + k4v[j]);
    s.g[j] += w * (k1g[j] + 2.0 * k2g[j] + 2.0 * k3g[j] + k4g[j]);
  }
  if (cfg.filter && filter) {
    filter->apply(s.m, Parity::even);
    filter->apply(s.v, Parity::odd);
    filter->apply(s.g, Parity::odd);
  }
  s.time += dt;
  if (!all_finite(s.m) || !all_finite(s.v) || !all_finite(s.g))
    throw InstabilityError(fmt::format("non-finite state after step at tau = {}", s.time));
}

ShockMonitor shock_monitor(const PrimalState& s, const RadialGrid& grid,
                           const PhysicalParams& params) {
  ShockMonitor m;
  m.max_grad_u = max_abs_deriv4(s.u, Parity::odd, 0.0, grid.dr());
  m.max_grad_n = max_abs_deriv4(s.n, Parity::even, params.n0, grid.dr());
  return m;
}

Diagnostics compute_diagnostics(const PrimalState& s, const RadialGrid& grid,
                                const PhysicalParams& params) {
  Diagnostics d;
  d.time = s.time;
  const double dr = grid.dr();
  const double two_pi = 2.0 * std::numbers::pi;
  const double g = params.gamma;
  const double n0 = params.n0;
  const double n0g = std::pow(n0, g);
  const double field_coef = 0.5 * params.charge_e / params.kappa;
  double mass = 0.0, energy = 0.0;
  for (std::size_t j = 0; j < s.n.size(); ++j) {
    const double r = grid.r(j);
    mass += (s.n[j] - n0) * r;
    const double internal = params.entropy_const_A *
                            (std::pow(s.n[j], g) - n0g - g * std::pow(n0, g - 1.0) * (s.n[j] - n0)) /
                            (g - 1.0);
    const double kinetic = 0.5 * params.mass_me * s.n[j] * s.u[j] * s.u[j];
    const double field = field_coef * s.E[j] * s.E[j];
    energy += (kinetic + internal + field) * r;
    d.sup_density_pert = std::max(d.sup_density_pert, std::abs(s.n[j] - n0));
    d.sup_velocity = std::max(d.sup_velocity, std::abs(s.u[j]));
    d.sup_E = std::max(d.sup_E, std::abs(s.E[j]));
  }
  d.excess_mass = two_pi * mass * dr;
  d.energy = two_pi * energy * dr;
  const ShockMonitor sm = shock_monitor(s, grid, params);
  d.max_grad_u = sm.max_grad_u;
  d.max_grad_n = sm.max_grad_n;
  return d;
}

namespace {

// Shared run loop: `advance` performs one step of at most dt_max and returns
// the primal view of the state for monitoring.
template <typename StepFn>
RunResult run_loop(const SolverConfig& cfg, StepFn&& advance, const PrimalState& initial_view,
                   double t_scale /* monitor time = state time / t_scale */) {
  RunResult res;
  const RadialGrid& grid = cfg.grid;
  const PhysicalParams& p = cfg.params;
  const ShockMonitor m0 = shock_monitor(initial_view, grid, p);
  res.trip_threshold = std::max(50.0 * m0.max_grad_u, 0.5 / grid.dr());
  res.series.push_back(compute_diagnostics(initial_view, grid, p));

  PrimalState view = initial_view;
  double t_phys = view.time;
  std::size_t step = 0;
  res.status = RunStatus::completed;
  while (t_phys < cfg.t_end - 1e-14 * cfg.t_end) {
    try {
      view = advance(cfg.t_end - t_phys);
    } catch (const InstabilityError&) {
      res.status = RunStatus::nan_detected;
      break;
    } catch (const VacuumError&) {
      res.status = RunStatus::vacuum;
      break;
    }
    t_phys = view.time / t_scale;
    ++step;
    double n_min = view.n.empty() ? 1.0 : *std::min_element(view.n.begin(), view.n.end());
    if (!(n_min > vacuum_rel_threshold * p.n0)) {
      res.status = RunStatus::vacuum;
      break;
    }
    const ShockMonitor sm = shock_monitor(view, grid, p);
    if (!std::isfinite(sm.max_grad_u)) {
      res.status = RunStatus::nan_detected;
      break;
    }
    if (step % cfg.diagnostics_stride == 0) {
      Diagnostics d = compute_diagnostics(view, grid, p);
      d.time = t_phys;
      res.series.push_back(d);
    }
    if (sm.max_grad_u > res.trip_threshold) {
      res.status = RunStatus::blowup_detected;
      break;
    }
  }
  if (res.series.empty() || res.series.back().time < t_phys) {
    Diagnostics d = compute_diagnostics(view, grid, p);
    d.time = t_phys;
    res.series.push_back(d);
  }
  res.final_primal = view;
  res.final_primal.time = t_phys;
  res.stop_time = t_phys;
  res.steps_taken = step;
  return res;
}

} // namespace

RunResult run(const SolverConfig& cfg, const PrimalState& initial) {
  cfg.validate();
  ProfileFilter filter(cfg.grid.num_cells);
  PrimalState s = initial;
  auto advance = [&](double dt_cap) -> PrimalState {
    double dt = std::min(cfl_dt(s.n, s.u, cfg.grid, cfg.params, cfg.cfl), dt_cap);
    step_rk4(s, dt, cfg, &filter);
    return s;
  };
  return run_loop(cfg, advance, s, 1.0);
}

RunResult run(const SolverConfig& cfg, const NormalizedState& initial) {
  cfg.validate();
  const DerivedConstants c = derive_constants(cfg.params);
  ProfileFilter filter(cfg.grid.num_cells);
  NormalizedState s = initial;
  auto to_view = [&](const NormalizedState& ns) {
    PrimalState ps;
    ps.time = ns.time; // run_loop divides by t_scale = c0
    from_normalized(ns.m, ns.v, cfg.params, c, ps.n, ps.u);
    ps.E = ns.g;
    return ps;
  };
  auto advance = [&](double dt_phys_cap) -> PrimalState {
    PrimalState view = to_view(s);
    double dt_tau = std::min(cfl_dt(view.n, view.u, cfg.grid, cfg.params, cfg.cfl) * c.c0,
                             dt_phys_cap * c.c0);
    step_rk4(s, dt_tau, cfg, c, &filter);
    return to_view(s);
  };
  PrimalState initial_view = to_view(s);
  initial_view.time = s.time / c.c0;
  RunResult res = run_loop(cfg, advance, initial_view, c.c0);
  res.final_normalized = s;
  return res;
}

} // namespace ep
