// End-to-end acceptance gate: one PASS/FAIL line per criterion.
#include <cmath>
#include <cstdio>
#include <fmt/format.h>
#include <iostream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "ep/embed.hpp"
#include "ep/errors.hpp"
#include "ep/field2d.hpp"
#include "ep/io.hpp"
#include "ep/klein_gordon.hpp"
#include "ep/params.hpp"
#include "ep/solver.hpp"

using namespace ep;

namespace {

int failures = 0;
std::map<int, std::string> lines;

void report(int idx, bool pass, const std::string& what) {
  lines[idx] = fmt::format("{} criterion {}: {}", pass ? "PASS" : "FAIL", idx, what);
  if (!pass) ++failures;
}

ScalarField2D gaussian2d(const CartesianGrid& g, double cx, double cy, double w) {
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

void add_swirl(VectorField2D& eta, double amp, double w) {
  const CartesianGrid& g = eta.grid;
  for (std::size_t iy = 0; iy < g.n; ++iy)
    for (std::size_t ix = 0; ix < g.n; ++ix) {
      const double x = g.coord(ix), y = g.coord(iy);
      const double a = amp * std::exp(-(x * x + y * y) / (w * w));
      eta.x[iy * g.n + ix] += -y * a;
      eta.y[iy * g.n + ix] += x * a;
    }
}

// --- criterion 1: curl-free fields are fixed by the projection -------------

void criterion1() {
  CartesianGrid g{256, 40.0};
  const double centers[5][2] = {{0, 0}, {1, 0.5}, {-1, 1}, {0.5, -1.5}, {0, 2}};
  const double widths[5] = {0.8, 1.0, 1.3, 1.7, 2.2};
  double worst = 0.0;
  for (int c = 0; c < 5; ++c) {
    const VectorField2D eta = gradient(gaussian2d(g, centers[c][0], centers[c][1], widths[c]));
    worst = std::max(worst, sup_diff(eta, riesz_apply(eta)) / eta.sup());
  }
  VectorField2D mixed = gradient(gaussian2d(g, 0, 0, 1.5));
  add_swirl(mixed, 0.1, 1.5);
  const double control = sup_diff(mixed, riesz_apply(mixed)) / mixed.sup();
  report(1, worst <= 1e-6 && control >= 0.05,
         fmt::format("projection identity residual {:.2e} (<= 1e-6), swirl control {:.2e} (>= 0.05)",
                     worst, control));
}

// --- criterion 2: embedded radial fields are curl-free ---------------------

double curl_residual(const CartesianGrid& g) {
  const double dr = 0.5 * g.box * std::numbers::sqrt2 / 16383.0;
  double worst = 0.0;
  for (int c = 0; c < 5; ++c) {
    std::vector<double> f(16384, 0.0);
    double sup_f = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = dr * static_cast<double>(i);
      if (c < 3) {
        const double w = (c == 0 ? 0.7 : c == 1 ? 1.0 : 1.8);
        f[i] = r * std::exp(-(r / w) * (r / w));
      } else {
        const double R = (c == 3 ? 14.0 : 15.0);
        const double s = r / R;
        f[i] = (s < 1.0) ? r * std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
      }
      sup_f = std::max(sup_f, std::abs(f[i]));
    }
    worst = std::max(worst, curl2d(embed_radial(f, dr, g)).sup() / sup_f);
  }
  return worst;
}

void criterion2() {
  const double coarse = curl_residual(CartesianGrid{256, 40.0});
  const double fine = curl_residual(CartesianGrid{512, 40.0});
  report(2, coarse <= 1e-6 && coarse / fine >= 10.0,
         fmt::format("curl residual {:.2e} (<= 1e-6), doubling improves {:.1f}x (>= 10)", coarse,
                     coarse / fine));
}

// --- criterion 3: field term is local on radial data -----------------------

void criterion3() {
  PhysicalParams p;
  const DerivedConstants dc = derive_constants(p);
  CartesianGrid g{256, 40.0};
  const double dr = 0.01;
  std::vector<double> m(4096), v(4096);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double r = dr * static_cast<double>(i);
    m[i] = 0.01 * std::exp(-r * r / 4.0);
    v[i] = 0.02 * r * std::exp(-r * r / 4.0);
  }
  const NonlocalComparison cmp = kg_nonlocal_term(m, v, dr, p, dc, g);

  // control: contaminate the embedded momentum with a swirl and reproject
  std::vector<double> q(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) q[i] = (m[i] - h_of_m(m[i], p.gamma)) * v[i];
  VectorField2D eta = embed_radial(q, dr, g);
  add_swirl(eta, 0.1 * eta.sup(), 2.0);
  const double control = sup_diff(eta, riesz_apply(eta)) / eta.sup();
  report(3, cmp.rel_diff <= 1e-5 && control >= 0.05,
         fmt::format("radial rel diff {:.2e} (<= 1e-5), swirl control {:.2e} (>= 0.05)",
                     cmp.rel_diff, control));
}

// --- criterion 4: linear dispersive decay ~ (1+t)^-1 -----------------------

void criterion4() {
  CartesianGrid g{1024, 320.0};
  ScalarField2D w0 = make_scalar(g);
  for (std::size_t iy = 0; iy < g.n; ++iy)
    for (std::size_t ix = 0; ix < g.n; ++ix) {
      const double x = g.coord(ix), y = g.coord(iy);
      w0.v[iy * g.n + ix] = std::exp(-(x * x + y * y));
    }
  const ScalarField2D w1 = make_scalar(g);
  std::vector<double> ts, sups;
  for (int i = 0; i < 40; ++i) {
    const double t = std::exp(std::log(120.0) * static_cast<double>(i) / 39.0);
    if (t < 20.0 || t > 120.0) continue;
    ts.push_back(t);
    sups.push_back(kg_linear_propagate(w0, w1, t, 1.0).w.sup());
  }
  const DecayFit fit = fit_decay_exponent(ts, sups);
  report(4, fit.exponent >= 0.85 && fit.exponent <= 1.15 && fit.residual <= 0.05,
         fmt::format("decay exponent {:.3f} (in [0.85, 1.15]), fit rms {:.3f} (<= 0.05)",
                     fit.exponent, fit.residual));
}

// --- criteria 5 + 10: shock/no-shock dichotomy and nonlinear decay ---------

FullConfig demo_config() {
  FullConfig cfg;
  cfg.solver.grid = RadialGrid{2048, 480.0};
  cfg.solver.t_end = 200.0;
  cfg.initial.amplitude = 0.1;
  cfg.initial.width = 3.0;
  cfg.initial.center = 5.0;
  cfg.initial.velocity_amplitude = 0.05;
  return cfg;
}

void criteria5and10() {
  FullConfig cfg = demo_config();
  double ratio = 0.0;
  const PrimalState data = build_initial(cfg, &ratio);
  const double g0 = shock_monitor(data, cfg.solver.grid, cfg.solver.params).max_grad_u;

  FullConfig off = cfg;
  off.solver.field_mode = FieldMode::off;
  off.solver.t_end = 40.0;
  PrimalState off_data = data;
  off_data.E.assign(off_data.n.size(), 0.0);
  const RunResult off_res = run(off.solver, off_data);

  const RunResult on_res = run(cfg.solver, data);
  double on_max_grad = 0.0;
  for (const auto& d : on_res.series) on_max_grad = std::max(on_max_grad, d.max_grad_u);

  FullConfig nf = cfg;
  nf.solver.filter = false;
  const RunResult nf_res = run(nf.solver, data);
  const bool no_nan = nf_res.status != RunStatus::nan_detected;

  const bool pass5 = off_res.status == RunStatus::blowup_detected && off_res.stop_time < 40.0 &&
                     on_res.status == RunStatus::completed && on_max_grad <= 5.0 * g0 && no_nan;
  report(5, pass5,
         fmt::format("field off {} at t={:.1f} (< 40), field on {} with max grad {:.2f}x initial "
                     "(<= 5), filter-off run {}",
                     to_string(off_res.status), off_res.stop_time, to_string(on_res.status),
                     on_max_grad / g0, to_string(nf_res.status)));

  std::vector<double> ft, fs;
  for (const auto& d : on_res.series)
    if (d.time >= 40.0 && d.time <= 200.0 && d.sup_density_pert > 0.0) {
      ft.push_back(d.time);
      fs.push_back(d.sup_density_pert);
    }
  bool pass10 = false;
  double expo = 0.0, rms = 0.0;
  if (ft.size() >= 8) {
    const DecayFit fit = fit_decay_exponent(ft, fs);
    expo = fit.exponent;
    rms = fit.residual;
    pass10 = fit.exponent >= 0.6;
  }
  report(10, pass10,
         fmt::format("nonlinear amplitude decay exponent {:.3f} (>= 0.6, heuristic), rms {:.3f}",
                     expo, rms));
}

// --- criterion 6: primal and normalized formulations agree -----------------

void criterion6() {
  FullConfig cfg;
  cfg.solver.grid = RadialGrid{1024, 120.0};
  cfg.solver.t_end = 10.0;
  cfg.initial.amplitude = 1e-3;
  const PrimalState data = build_initial(cfg);
  const DerivedConstants dc = derive_constants(cfg.solver.params);

  const RunResult pres = run(cfg.solver, data);
  NormalizedState ns;
  to_normalized(data.n, data.u, cfg.solver.params, dc, ns.m, ns.v);
  ns.g = data.E;
  SolverConfig ncfg = cfg.solver;
  ncfg.formulation = Formulation::normalized;
  const RunResult nres = run(ncfg, ns);

  double worst = 0.0;
  for (std::size_t j = 0; j < data.n.size(); ++j) {
    worst = std::max(worst, std::abs(pres.final_primal.n[j] - nres.final_primal.n[j]));
    worst = std::max(worst, std::abs(pres.final_primal.u[j] - nres.final_primal.u[j]));
    worst = std::max(worst, std::abs(pres.final_primal.E[j] - nres.final_primal.E[j]));
  }
  const bool ok = pres.status == RunStatus::completed && nres.status == RunStatus::completed &&
                  worst <= 1e-5;
  report(6, ok, fmt::format("sup difference between formulations {:.2e} at t=10 (<= 1e-5)", worst));
}

// --- criterion 7: conservation ---------------------------------------------

void criterion7() {
  FullConfig cfg;
  cfg.solver.grid = RadialGrid{1024, 120.0};
  cfg.solver.t_end = 50.0;
  cfg.solver.diagnostics_stride = 1; // per-step mass bookkeeping
  cfg.initial.amplitude = 1e-3;
  cfg.initial.velocity_amplitude = 5e-4;
  const PrimalState data = build_initial(cfg);
  const RunResult res = run(cfg.solver, data);

  const double total = std::numbers::pi * cfg.solver.grid.r_max * cfg.solver.grid.r_max;
  double mass_step = 0.0;
  for (std::size_t i = 1; i < res.series.size(); ++i)
    mass_step = std::max(mass_step,
                         std::abs(res.series[i].excess_mass - res.series[i - 1].excess_mass));
  const double mass_rel = mass_step / total;
  const double e0 = res.series.front().energy;
  double energy_drift = 0.0;
  for (const auto& d : res.series)
    energy_drift = std::max(energy_drift, std::abs(d.energy - e0) / e0);
  const bool ok = res.status == RunStatus::completed && mass_rel <= 1e-12 && energy_drift <= 1e-5;
  report(7, ok,
         fmt::format("mass drift {:.2e} relative per step (<= 1e-12), energy drift {:.2e} over "
                     "[0,50] (<= 1e-5)",
                     mass_rel, energy_drift));
}

// --- criterion 8: transform unit properties --------------------------------

void criterion8() {
  PhysicalParams g3; // defaults
  const DerivedConstants c3 = derive_constants(g3);
  bool ok = std::abs(c3.c0 - std::sqrt(3.0)) <= 1e-15 && std::abs(c3.m0 - 1.0 / 3.0) <= 1e-15;
  for (double m : {-0.5, 0.0, 0.4, 2.0}) ok = ok && std::abs(h_of_m(m, 3.0)) <= 1e-15;
  ok = ok && std::abs(h_of_m(2.0, 2.0) + 1.0) <= 1e-14;

  PhysicalParams p;
  p.gamma = 2.0;
  const DerivedConstants dc = derive_constants(p);
  std::vector<double> n, u;
  for (int i = 0; i < 64; ++i) {
    n.push_back(1.0 + 0.3 * std::sin(0.2 * i));
    u.push_back(0.1 * std::cos(0.3 * i));
  }
  std::vector<double> m, v, n2, u2;
  to_normalized(n, u, p, dc, m, v);
  from_normalized(m, v, p, dc, n2, u2);
  double rt = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i)
    rt = std::max({rt, std::abs(n2[i] - n[i]), std::abs(u2[i] - u[i])});
  ok = ok && rt <= 1e-12;
  report(8, ok,
         fmt::format("derived constants exact, h identities hold, roundtrip error {:.2e} (<= 1e-12)",
                     rt));
}

// --- criterion 9: convergence orders ---------------------------------------

double spatial_err(std::size_t N) {
  PhysicalParams p;
  SolverConfig cfg;
  cfg.grid = RadialGrid{N, 40.0};
  cfg.field_mode = FieldMode::off;
  cfg.t_end = 1.0;
  PrimalState s;
  s.n.resize(N);
  s.u.resize(N);
  s.E.assign(N, 0.0);
  const double r0 = 15.0, w = 2.0;
  for (std::size_t j = 0; j < N; ++j) {
    const double r = cfg.grid.r(j);
    const double a = (r - r0) / w;
    s.n[j] = p.n0 + 0.05 * std::exp(-a * a);
    s.u[j] = 0.1 * std::exp(-a * a);
  }
  std::vector<double> dn, du, dE;
  primal_rhs(s, cfg, dn, du, dE);
  double e = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const double r = cfg.grid.r(j);
    const double a = (r - r0) / w;
    const double ex = std::exp(-a * a);
    const double n = p.n0 + 0.05 * ex, u = 0.1 * ex;
    const double dn_dr = -2.0 * a / w * 0.05 * ex;
    const double du_dr = -2.0 * a / w * 0.1 * ex;
    const double exact = -(dn_dr * u + n * du_dr) - n * u / r;
    if (r > 5.0 && r < 25.0) e = std::max(e, std::abs(dn[j] - exact));
  }
  return e;
}

void criterion9() {
  const double spatial_ratio = spatial_err(512) / spatial_err(1024);

  FullConfig fc;
  fc.solver.grid = RadialGrid{512, 120.0};
  fc.solver.t_end = 1.0;
  fc.solver.filter = false;
  fc.solver.dissipation = 0.0;
  fc.initial.amplitude = 0.01;
  fc.initial.center = 20.0;
  const PrimalState s0 = build_initial(fc);
  auto integrate = [&](double dt, int steps) {
    PrimalState s = s0;
    for (int i = 0; i < steps; ++i) step_rk4(s, dt, fc.solver, nullptr);
    return s;
  };
  const PrimalState ref = integrate(0.01, 64);
  const PrimalState a = integrate(0.08, 8);
  const PrimalState b = integrate(0.04, 16);
  double ea = 0.0, eb = 0.0;
  for (std::size_t j = 0; j < s0.n.size(); ++j) {
    ea = std::max(ea, std::abs(a.n[j] - ref.n[j]));
    eb = std::max(eb, std::abs(b.n[j] - ref.n[j]));
  }
  const double temporal_ratio = ea / eb;
  report(9, spatial_ratio >= 12.0 && temporal_ratio >= 12.0 && temporal_ratio <= 22.0,
         fmt::format("spatial doubling ratio {:.1f} (>= 12), temporal halving ratio {:.1f} (~16)",
                     spatial_ratio, temporal_ratio));
}

} // namespace

int main() {
  try {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criteria5and10();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
  } catch (const std::exception& e) {
    for (const auto& [idx, line] : lines) std::cout << line << "\n";
    std::cout << "FAIL (exception): " << e.what() << "\n";
    return 1;
  }
  for (const auto& [idx, line] : lines) std::cout << line << "\n";
  return failures == 0 ? 0 : 1;
}
