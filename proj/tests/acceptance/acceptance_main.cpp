// Acceptance suite: runs the binding checks end to end and prints one
// pass/fail line per criterion. Each criterion can be selected with
// --criterion N (default: all).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qp_oracle.hpp"
#include "test_util.hpp"
#include "wgf/io.hpp"
#include "wgf/jko.hpp"
#include "wgf/presets.hpp"

using namespace wgf;
using wgf::test::Rng;

namespace {

struct Check {
  int id;
  const char* name;
  std::function<bool(std::string&)> fn;
};

double total_mass(const DensityField& rho, const GridSpec& g) {
  double m = 0.0;
  for (double v : rho.values) m += v;
  return m * g.cell_volume();
}

double initial_energy(const GradientFlowProblem& p, const DensityField& rho) {
  if (p.diagnostic_energy) return p.diagnostic_energy(rho, p.grid);
  if (p.energy.has_value()) return p.energy.value(rho, p.grid);
  return std::numeric_limits<double>::quiet_NaN();
}

RunResult run_preset(const Preset& ps, const GridSpec& g, double t_end,
                     StepSink sink = {}) {
  GradientFlowProblem p = ps.make_problem(g);
  DensityField rho0 = ps.initial(g, ps.default_seed);
  TimeLoopSpec loop = ps.loop;
  loop.t_end = t_end;
  return run(rho0, p, ps.solver, loop, sink);
}

int count_positive_components(const DensityField& rho, const GridSpec& g) {
  std::vector<int> label(g.num_cells(), 0);
  int comps = 0;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      std::size_t idx = g.cell_index(i, j);
      if (rho[idx] <= 0.0 || label[idx]) continue;
      ++comps;
      std::vector<std::size_t> stack{idx};
      label[idx] = comps;
      while (!stack.empty()) {
        std::size_t cur = stack.back();
        stack.pop_back();
        int ci = static_cast<int>(cur % g.n), cj = static_cast<int>(cur / g.n);
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int ni = ci + di[k], nj = cj + dj[k];
          if (ni < 0 || nj < 0 || ni >= g.n || nj >= g.n) continue;
          std::size_t nidx = g.cell_index(ni, nj);
          if (rho[nidx] > 0.0 && !label[nidx]) {
            label[nidx] = comps;
            stack.push_back(nidx);
          }
        }
      }
    }
  return comps;
}

// ---------------------------------------------------------------------------
// 1. Structure preservation on presets 1, 2, 4, 6 at desk scale

bool criterion1(std::string& detail) {
  struct Job {
    const char* preset;
    int n_override;  // 0 = default
    double t_end;
  };
  const Job jobs[] = {
      {"porous_media", 0, 0.05},
      {"fokker_planck_saturated", 0, 5.0},
      {"cahn_hilliard", 64, 0.05},
      {"doubly_degenerate", 64, 5.0},
  };
  bool ok = true;
  for (const Job& job : jobs) {
    Preset ps = load_preset(job.preset);
    GridSpec g = job.n_override ? ps.make_grid_n(job.n_override)
                                : ps.make_grid();
    GradientFlowProblem p = ps.make_problem(g);
    DensityField rho0 = ps.initial(g, ps.default_seed);
    TimeLoopSpec loop = ps.loop;
    loop.t_end = job.t_end;
    RunResult r = run(rho0, p, ps.solver, loop);
    StructureReport rep =
        check_structure(r.series, ps.solver.tolerance, p.box,
                        initial_energy(p, rho0), total_mass(rho0, g));
    double drift = 0.0, m0 = total_mass(rho0, g);
    for (const auto& d : r.series)
      drift = std::max(drift, std::abs(d.mass - m0) / std::abs(m0));
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s: steps=%zu drift=%.2e violations=%zu; ",
                  job.preset, r.series.size(), drift, rep.violations.size());
    detail += buf;
    if (!rep.ok()) {
      ok = false;
      for (std::size_t k = 0; k < std::min<std::size_t>(3, rep.violations.size());
           ++k) {
        std::snprintf(buf, sizeof(buf), "[step %d %s %.3e] ",
                      rep.violations[k].step, rep.violations[k].kind.c_str(),
                      rep.violations[k].magnitude);
        detail += buf;
      }
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 2. Accuracy against the self-similar profile, monotone under refinement

bool criterion2(std::string& detail) {
  // Threshold pre-registered from the baseline refinement run (see ledger):
  // measured Linf at h = 0.01 was 0.0232; frozen with margin.
  const double frozen_h001_bound = 0.030;
  Preset ps = load_preset("porous_media");
  std::vector<double> errs;
  for (double h : {0.04, 0.02, 0.01}) {
    GridSpec g = ps.make_grid_h(h);
    RunResult r = run_preset(ps, g, 0.05);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i)
      err = std::max(err, std::abs(r.final_rho[i] -
                                   barenblatt(g.cell_center(i), 0.05)));
    errs.push_back(err);
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "Linf(h=0.04)=%.4f Linf(0.02)=%.4f Linf(0.01)=%.4f bound=%.3f",
                errs[0], errs[1], errs[2], frozen_h001_bound);
  detail = buf;
  return errs[0] > errs[1] && errs[1] > errs[2] &&
         errs[2] < frozen_h001_bound;
}

// ---------------------------------------------------------------------------
// 3. Grid-independent inner iteration counts

bool criterion3(std::string& detail) {
  auto rows = study_grid_independence("porous_media",
                                      {0.04, 0.02, 0.01, 0.005});
  double lo = rows[0].mean_iters, hi = rows[0].mean_iters;
  for (const auto& r : rows) {
    lo = std::min(lo, r.mean_iters);
    hi = std::max(hi, r.mean_iters);
  }
  for (const auto& r : rows) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "h=%g: first=%d mean=%.1f; ", r.h,
                  r.first_step_iters, r.mean_iters);
    detail += buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max/min=%.3f (<1.5 required)", hi / lo);
  detail += buf;
  return hi / lo < 1.5;
}

// ---------------------------------------------------------------------------
// 4. Proximal operators against independent oracles

ParabolaPoint boundary_search(const ParabolaPoint& p0) {
  double psin = std::hypot(p0.psi[0], p0.psi[1]);
  auto dist2 = [&](double s) {
    double dphi = -0.5 * s * s - p0.phi;
    double dpsi = s - psin;
    return dphi * dphi + dpsi * dpsi;
  };
  double smax = 2.0 * (psin + std::sqrt(std::abs(p0.phi)) + 2.0);
  const int N = 20000;
  double best_s = 0.0, best = dist2(0.0);
  for (int k = 1; k <= N; ++k) {
    double s = smax * k / N;
    double d = dist2(s);
    if (d < best) {
      best = d;
      best_s = s;
    }
  }
  double a = std::max(0.0, best_s - smax / N), b = best_s + smax / N;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 120; ++it) {
    if (dist2(c) < dist2(d))
      b = d;
    else
      a = c;
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  double s = 0.5 * (a + b);
  ParabolaPoint out;
  out.dim = p0.dim;
  if (psin > 0) {
    out.phi = -0.5 * s * s;
    out.psi[0] = s * p0.psi[0] / psin;
    out.psi[1] = s * p0.psi[1] / psin;
  } else {
    out.phi = std::min(p0.phi, 0.0);
    out.psi = {0.0, 0.0};
  }
  return out;
}

bool criterion4(std::string& detail) {
  Rng rng(2024);
  // (a) cone projection vs boundary search on 1e4 points + KKT residuals
  double worst_gap = 0.0, worst_kkt = 0.0;
  for (int k = 0; k < 10000; ++k) {
    ParabolaPoint p0;
    p0.dim = k % 2 ? 2 : 1;
    p0.phi = rng.uniform(-3.0, 5.0);
    p0.psi[0] = rng.uniform(-4.0, 4.0);
    if (p0.dim == 2) p0.psi[1] = rng.uniform(-4.0, 4.0);
    ParabolaPoint p = project_parabola(p0);
    double viol = p.phi + 0.5 * (p.psi[0] * p.psi[0] + p.psi[1] * p.psi[1]);
    if (p0.phi + 0.5 * (p0.psi[0] * p0.psi[0] + p0.psi[1] * p0.psi[1]) > 0) {
      double lam = p0.phi - p.phi;
      double kkt = std::max({std::abs(viol),
                             std::abs((1 + lam) * p.psi[0] - p0.psi[0]),
                             std::abs((1 + lam) * p.psi[1] - p0.psi[1])});
      worst_kkt = std::max(worst_kkt, kkt);
      ParabolaPoint o = boundary_search(p0);
      worst_gap = std::max({worst_gap, std::abs(p.phi - o.phi),
                            std::abs(p.psi[0] - o.psi[0]),
                            std::abs(p.psi[1] - o.psi[1])});
    }
  }
  bool ok_a = worst_gap <= 1e-6 && worst_kkt <= 1e-12;

  // (b) primal projection vs dense enumeration on 200 instances, n <= 6
  double worst_qp = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    GridSpec g = rep % 3 == 2 ? GridSpec{2, 2, 0.5, {0, 0}}
                              : GridSpec{1, 2 + (rep % 5), 0.3, {0, 0}};
    double lo = -0.2, hi = 0.6;
    DensityField prev = rng.density(g, lo + 0.05, hi - 0.05);
    DensityField rho0 = rng.density(g, lo - 0.5, hi + 0.5);
    MomentumField m0 = rng.momentum(g, -0.5, 0.5);
    ActiveSetState warm;
    DensityField rho;
    MomentumField m;
    prox_primal(rho0, m0, prev, {lo, hi}, g, warm, rho, m);
    auto oracle = test::qp_enumeration_oracle(g, test::flatten(rho0),
                                              test::flatten(m0),
                                              test::flatten(prev), lo, hi);
    if (!oracle) {
      detail += "enumeration oracle found no admissible set; ";
      return false;
    }
    worst_qp = std::max(
        worst_qp,
        (test::flatten(rho) - oracle->rho).lpNorm<Eigen::Infinity>());
    worst_qp = std::max(
        worst_qp, (test::flatten(m) - oracle->m).lpNorm<Eigen::Infinity>());
  }
  bool ok_b = worst_qp <= 1e-8;

  // (c) entropy conjugate prox optimality + Moreau identity
  GridSpec g{1, 200, 1.0, {0, 0}};
  DensityField mu0 = rng.density(g, -8.0, 8.0);
  double sigma = 3.0, dt = 0.7;
  EntropyConjugateProx entropy;
  DensityField direct;
  entropy.prox(mu0, sigma, dt, g, direct);
  double worst_opt = 0.0, worst_moreau = 0.0;
  DensityField scaled = mu0;
  for (double& v : scaled.values) v /= sigma;
  DensityField w = prox_entropy_primal(scaled, dt / sigma);
  for (std::size_t i = 0; i < mu0.size(); ++i) {
    double res = sigma * std::exp(direct.values[i] / dt) + direct.values[i] -
                 mu0.values[i];
    worst_opt = std::max(worst_opt,
                         std::abs(res) / (1.0 + std::abs(mu0.values[i])));
    worst_moreau =
        std::max(worst_moreau, std::abs(direct.values[i] -
                                        (mu0.values[i] -
                                         sigma * w.values[i])));
  }
  bool ok_c = worst_opt <= 1e-10 && worst_moreau <= 1e-8;

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "projection gap %.2e kkt %.2e; qp gap %.2e; conjugate "
                "residual %.2e moreau %.2e",
                worst_gap, worst_kkt, worst_qp, worst_opt, worst_moreau);
  detail = buf;
  return ok_a && ok_b && ok_c;
}

// ---------------------------------------------------------------------------
// 5. Reduction to the fixed-operator primal-dual iteration

bool criterion5(std::string& detail) {
  GridSpec g{1, 16, 1.0 / 16, {0, 0}};
  GradientFlowProblem p;
  p.grid = g;
  p.box = {0.0, 1e6};
  p.mobility = make_mobility("linear", 0.0, 1e6);
  p.energy = make_quadratic_energy();
  const double dt = 0.01;
  SolverConfig cfg;
  cfg.tau = 0.7;
  cfg.sigma = 0.9 / 0.7;
  cfg.check_stepsize = false;

  DensityField prev = make_density(g);
  for (int i = 0; i < g.n; ++i)
    prev.values[i] = 0.3 + 0.2 * std::sin(2.0 * M_PI * (i + 0.5) / g.n);

  PrimalState u;
  u.rho = make_density(g);
  u.m = make_momentum(g);
  u.rho_bar = u.rho;
  u.m_bar = u.m;
  DualStateFull v;
  v.phi = make_density(g);
  v.psi = make_cell_vector(g);
  PrimalProjector projA(g, p.box);

  DensityField rho = make_density(g), rho_bar = make_density(g);
  MomentumField m = make_momentum(g), m_bar = make_momentum(g);
  DensityField phi = make_density(g);
  CellVectorField psi = make_cell_vector(g);
  PrimalProjector projB(g, p.box);

  double worst = 0.0;
  for (int it = 0; it < 100; ++it) {
    dual_update(u, prev, cfg, p, dt, v);
    primal_update(u, v, prev, cfg, p, dt, projA);

    for (int i = 0; i < g.n; ++i)
      phi.values[i] +=
          cfg.sigma * (0.5 * rho_bar.values[i] + 0.5 * prev.values[i]);
    CellVectorField avg = apply_avg(m_bar, g);
    for (int i = 0; i < g.n; ++i)
      psi.comp[0][i] += cfg.sigma * avg.comp[0][i];
    project_parabola_field(phi, psi);

    DensityField rho_half = make_density(g);
    for (int i = 0; i < g.n; ++i)
      rho_half.values[i] =
          rho.values[i] -
          cfg.tau * (dt * 2.0 * rho.values[i] + 0.5 * phi.values[i]);
    MomentumField m_half = apply_avg_adjoint(psi, g);
    for (std::size_t f = 0; f < m_half.comp[0].size(); ++f)
      m_half.comp[0][f] = m.comp[0][f] - cfg.tau * m_half.comp[0][f];
    DensityField rho_new;
    MomentumField m_new;
    projB.project(rho_half, m_half, prev, rho_new, m_new);
    for (int i = 0; i < g.n; ++i)
      rho_bar.values[i] = 2.0 * rho_new.values[i] - rho.values[i] -
                          cfg.tau * dt * 2.0 *
                              (rho_new.values[i] - rho.values[i]);
    for (std::size_t f = 0; f < m.comp[0].size(); ++f)
      m_bar.comp[0][f] = 2.0 * m_new.comp[0][f] - m.comp[0][f];
    rho = rho_new;
    m = m_new;

    for (int i = 0; i < g.n; ++i) {
      worst = std::max(worst, std::abs(u.rho[i] - rho.values[i]));
      worst = std::max(worst, std::abs(v.phi[i] - phi.values[i]));
      worst = std::max(worst, std::abs(v.psi.comp[0][i] - psi.comp[0][i]));
    }
    for (std::size_t f = 0; f < m.comp[0].size(); ++f)
      worst = std::max(worst, std::abs(u.m.comp[0][f] - m.comp[0][f]));
    if (worst > 1e-12) break;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max iterate gap %.3e over 100 iterations",
                worst);
  detail = buf;
  return worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// 6. Step-size bound values and per-preset classification

bool criterion6(std::string& detail) {
  GridSpec g1{1, 4, 1.0, {0, 0}};
  DensityField probe = make_density(g1, 0.5);
  MobilityModel lin = make_mobility("linear", 0.0, 1.0);
  MobilityModel sat = make_mobility("saturation", 0.0, 1.0);
  bool exact = stepsize_bound({0.0, 1.0}, probe, lin) == 1.0 &&
               stepsize_bound({0.0, 1.0}, probe, sat) == 1.0;
  detail += exact ? "reference bounds exactly 1; " : "reference bounds wrong; ";

  // expected classification: strict pass except the cubic-mobility films,
  // whose derivative is unbounded over their wide box
  struct Expect {
    const char* preset;
    bool strict_pass;
  };
  const Expect table[] = {
      {"porous_media", true},          {"fokker_planck_saturated", true},
      {"thin_film", false},            {"thin_film_vdw1", false},
      {"thin_film_vdw2", false},       {"cahn_hilliard", true},
      {"cahn_hilliard_aniso_fourfold", true},
      {"cahn_hilliard_aniso_eightfold", true},
      {"cahn_hilliard_aniso_omega", true},
      {"doubly_degenerate", true},
  };
  bool ok = exact;
  for (const auto& e : table) {
    Preset ps = load_preset(e.preset);
    GridSpec g = ps.make_grid();
    GradientFlowProblem p = ps.make_problem(g);
    DensityField rho0 = ps.initial(g, ps.default_seed);
    double bound = stepsize_bound(p.box, rho0, p.mobility);
    bool passes = ps.solver.tau * ps.solver.sigma <= bound * (1 + 1e-12);
    if (passes != e.strict_pass) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%s: bound=%.3g tau*sigma=%.3g; ",
                    e.preset, bound, ps.solver.tau * ps.solver.sigma);
      detail += buf;
      ok = false;
    }
  }

  // semi-implicit variants pass strictly
  for (const char* name : {"fokker_planck_saturated", "thin_film"}) {
    Preset ps = load_preset(name);
    GridSpec g = ps.make_grid();
    GradientFlowProblem p =
        ps.make_problem(g, MobilityMode::SemiImplicit, ps.box);
    DensityField rho0 = ps.initial(g, ps.default_seed);
    double bound = stepsize_bound(p.box, rho0, p.mobility);
    double tau = ps.semi_tau > 0 ? ps.semi_tau : ps.solver.tau;
    double sigma = ps.semi_sigma > 0 ? ps.semi_sigma : ps.solver.sigma;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s semi: tau*sigma=%.3g bound=%.3g; ",
                  name, tau * sigma, bound);
    detail += buf;
    if (tau * sigma > bound * (1 + 1e-12)) ok = false;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 7. Operator algebra property suite

bool criterion7(std::string& detail) {
  Rng rng(7);
  double worst_adj = 0.0, worst_mass = 0.0, worst_dense = 0.0;
  for (GridSpec g : {GridSpec{1, 5, 0.5, {0, 0}}, GridSpec{1, 8, 0.25, {0, 0}},
                     GridSpec{2, 4, 0.25, {0, 0}},
                     GridSpec{2, 8, 0.125, {0, 0}}}) {
    Eigen::MatrixXd A = test::dense_div(g);
    Eigen::MatrixXd I = test::dense_avg(g);
    for (int rep = 0; rep < 25; ++rep) {
      MomentumField m = rng.momentum(g);
      DensityField r = rng.density(g);
      CellVectorField w = rng.cell_vector(g);
      double lhs = test::flatten(apply_div(m, g)).dot(test::flatten(r));
      double rhs = test::flatten(m).dot(test::flatten(apply_div_adjoint(r, g)));
      worst_adj = std::max(worst_adj,
                           std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
      double lhs2 = test::flatten(apply_avg(m, g)).dot(test::flatten(w));
      double rhs2 =
          test::flatten(m).dot(test::flatten(apply_avg_adjoint(w, g)));
      worst_adj = std::max(worst_adj,
                           std::abs(lhs2 - rhs2) / (1.0 + std::abs(lhs2)));
      DensityField div = apply_div(m, g);
      double total = 0.0;
      for (double v : div.values) total += v;
      worst_mass = std::max(worst_mass, std::abs(total * g.cell_volume()));

      worst_dense = std::max(
          worst_dense,
          (A * test::flatten(m) - test::flatten(apply_div(m, g))).norm());
      worst_dense = std::max(
          worst_dense,
          (I * test::flatten(m) - test::flatten(apply_avg(m, g))).norm());
      worst_dense =
          std::max(worst_dense, (A.transpose() * test::flatten(r) -
                                 test::flatten(apply_div_adjoint(r, g)))
                                    .norm());
    }
  }
  double worst_dct = 0.0;
  for (GridSpec g :
       {GridSpec{1, 64, 1.0 / 64, {0, 0}}, GridSpec{2, 32, 1.0 / 32, {0, 0}}}) {
    DensityField rhs = rng.density(g);
    double scale = 4.0;
    DensityField x = solve_identity_plus_div_divT(rhs, g, scale);
    MomentumField mt = apply_div_adjoint(x, g);
    DensityField aat = apply_div(mt, g);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.num_cells(); ++i) {
      double r = x[i] + scale * aat.values[i] - rhs[i];
      num += r * r;
      den += rhs[i] * rhs[i];
    }
    worst_dct = std::max(worst_dct, std::sqrt(num / den));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "adjoint %.2e mass %.2e dense %.2e dct-residual %.2e",
                worst_adj, worst_mass, worst_dense, worst_dct);
  detail = buf;
  return worst_adj <= 1e-12 && worst_mass <= 1e-12 && worst_dense <= 1e-12 &&
         worst_dct <= 1e-10;
}

// ---------------------------------------------------------------------------
// 8. Qualitative dynamics: saturation bound, component preservation,
//    energy decay contrast

bool criterion8(std::string& detail) {
  // saturated Fokker-Planck: no overshoot above the saturation level
  Preset fp = load_preset("fokker_planck_saturated");
  GridSpec gfp = fp.make_grid();
  RunResult rfp = run_preset(fp, gfp, 5.0);
  double max_rho = 0.0;
  for (const auto& d : rfp.series) max_rho = std::max(max_rho, d.max_rho);
  bool ok_fp = max_rho <= 1.0 + 1e-12;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "saturation max=%.12f; ", max_rho);
  detail += buf;

  // degenerate double-well: energy decays monotonically within slack
  Preset ch = load_preset("cahn_hilliard");
  GridSpec gch = ch.make_grid_n(64);
  GradientFlowProblem pch = ch.make_problem(gch);
  DensityField rho0 = ch.initial(gch, ch.default_seed);
  TimeLoopSpec loop = ch.loop;
  loop.t_end = 0.05;
  RunResult rch = run(rho0, pch, ch.solver, loop);
  bool ok_ch = true;
  double e_prev = pch.energy.value(rho0, gch);
  for (const auto& d : rch.series) {
    if (d.energy > e_prev + 10.0 * ch.solver.tolerance * (1 + std::abs(e_prev)))
      ok_ch = false;
    e_prev = d.energy;
  }
  std::snprintf(buf, sizeof(buf), "double-well energy monotone=%d; ", ok_ch);
  detail += buf;

  // doubly degenerate interface model: the two inclusions stay disjoint
  Preset dd = load_preset("doubly_degenerate");
  GridSpec gdd = dd.make_grid_n(64);
  GradientFlowProblem pdd = dd.make_problem(gdd);
  DensityField dd0 = dd.initial(gdd, dd.default_seed);
  TimeLoopSpec ldd = dd.loop;
  ldd.t_end = 5.0;
  int min_comps = count_positive_components(dd0, gdd), max_comps = min_comps;
  StepSink sink;
  int step_counter = 0;
  DensityField last;
  sink.on_step = [&](const StepDiagnostics&) { ++step_counter; };
  sink.on_snapshot = [&](int, double, const DensityField& rho) {
    int c = count_positive_components(rho, gdd);
    min_comps = std::min(min_comps, c);
    max_comps = std::max(max_comps, c);
  };
  RunResult rdd = run(dd0, pdd, dd.solver, ldd, sink);
  int final_comps = count_positive_components(rdd.final_rho, gdd);
  std::snprintf(buf, sizeof(buf),
                "components min=%d max=%d final=%d (2 required)", min_comps,
                max_comps, final_comps);
  detail += buf;
  bool ok_dd = min_comps == 2 && max_comps == 2 && final_comps == 2;
  return ok_fp && ok_ch && ok_dd;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Check> checks = {
      {1, "structure preservation (mass, bounds, energy within slack)",
       criterion1},
      {2, "self-similar accuracy under grid refinement", criterion2},
      {3, "grid-independent inner iteration counts", criterion3},
      {4, "proximal operators vs independent oracles", criterion4},
      {5, "reduction to the fixed-operator primal-dual method", criterion5},
      {6, "product step-size bound and preset classification", criterion6},
      {7, "operator algebra property suite", criterion7},
      {8, "qualitative dynamics (saturation, decay, components)", criterion8},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only = std::atoi(argv[i + 1]);

  int failures = 0;
  for (const auto& c : checks) {
    if (only && c.id != only) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail += std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", c.id,
                c.name, detail.c_str());
    std::fflush(stdout);
    failures += !ok;
  }
  return failures == 0 ? 0 : 1;
}
