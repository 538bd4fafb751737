#include "wgf/pdfb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "wgf/errors.hpp"

namespace wgf {

double stepsize_bound(const BoxBounds& box, const DensityField& rho_prev,
                      const MobilityModel& mob) {
  double max_sq = 0.0;
  if (mob.mode == MobilityMode::Implicit) {
    const int samples = 10000;
    for (int k = 0; k <= samples; ++k) {
      double s = box.lo + (box.hi - box.lo) * (double(k) / samples);
      double d = 0.5 * mob.deriv(s);
      max_sq = std::max(max_sq, d * d);
    }
    // endpoints are included by k = 0 and k = samples
  } else {
    for (double r : rho_prev.values) {
      double a = mob.slope(mob.clamp(r));
      max_sq = std::max(max_sq, a * a);
    }
  }
  return 1.0 / std::max(1.0, max_sq);
}

SaddleWorkspace::SaddleWorkspace(const GradientFlowProblem& p)
    : projector(p.grid, p.box) {}

namespace {

bool splitting_active(const SolverConfig& cfg, const GradientFlowProblem& p) {
  return cfg.convex_splitting && p.energy.has_split();
}

// forward gradient of the smooth energy part: full grad, or the V part when
// the splitting is active
void forward_energy_grad(const SolverConfig& cfg, const GradientFlowProblem& p,
                         const DensityField& rho, DensityField& out) {
  if (splitting_active(cfg, p))
    p.energy.split->v_grad(rho, p.grid, out);
  else
    p.energy.grad(rho, p.grid, out);
}

}  // namespace

void dual_update(const PrimalState& u, const DensityField& rho_prev,
                 const SolverConfig& cfg, const GradientFlowProblem& p,
                 double dt, DualStateFull& v) {
  const std::size_t n = p.grid.num_cells();
  DensityField vals, derivs;
  mobility_midpoint(u.rho, rho_prev, p.mobility, vals, derivs);

  // phi ascent with the first-order expansion of the mobility around u
  for (std::size_t i = 0; i < n; ++i)
    v.phi.values[i] += cfg.sigma * (derivs[i] * (u.rho_bar[i] - u.rho[i]) +
                                    vals[i]);
  CellVectorField avg;
  apply_avg(u.m_bar, p.grid, avg);
  for (int q = 0; q < p.grid.dim; ++q)
    for (std::size_t i = 0; i < n; ++i)
      v.psi.comp[q][i] += cfg.sigma * avg.comp[q][i];

  project_parabola_field(v.phi, v.psi);

  if (splitting_active(cfg, p)) {
    if (!v.mu) v.mu = make_density(p.grid);
    DensityField& mu = *v.mu;
    for (std::size_t i = 0; i < n; ++i)
      mu.values[i] += cfg.sigma * u.rho_bar[i];
    DensityField out;
    p.energy.split->u_prox->prox(mu, cfg.sigma, dt, p.grid, out, &u.rho_bar);
    mu = std::move(out);
  }
}

void primal_update(PrimalState& u, const DualStateFull& v,
                   const DensityField& rho_prev, const SolverConfig& cfg,
                   const GradientFlowProblem& p, double dt,
                   PrimalProjector& projector) {
  const std::size_t n = p.grid.num_cells();
  const bool split = splitting_active(cfg, p);

  DensityField grad_old, vals, derivs_old;
  forward_energy_grad(cfg, p, u.rho, grad_old);
  mobility_midpoint(u.rho, rho_prev, p.mobility, vals, derivs_old);

  DensityField rho_half = make_density(p.grid);
  for (std::size_t i = 0; i < n; ++i) {
    double step = dt * grad_old[i] + derivs_old[i] * v.phi.values[i];
    if (split) step += (*v.mu)[i];
    rho_half.values[i] = u.rho[i] - cfg.tau * step;
  }
  MomentumField m_half;
  apply_avg_adjoint(v.psi, p.grid, m_half);
  for (int q = 0; q < p.grid.dim; ++q)
    for (std::size_t f = 0; f < m_half.comp[q].size(); ++f)
      m_half.comp[q][f] = u.m.comp[q][f] - cfg.tau * m_half.comp[q][f];

  DensityField rho_new;
  MomentumField m_new;
  projector.project(rho_half, m_half, rho_prev, rho_new, m_new);

  // gradient-informed reflection; the momentum part has no smooth gradient,
  // so its difference term vanishes
  DensityField grad_new, vals_new, derivs_new;
  forward_energy_grad(cfg, p, rho_new, grad_new);
  mobility_midpoint(rho_new, rho_prev, p.mobility, vals_new, derivs_new);
  for (std::size_t i = 0; i < n; ++i) {
    double diff = dt * (grad_new[i] - grad_old[i]) +
                  (derivs_new[i] - derivs_old[i]) * v.phi.values[i];
    u.rho_bar[i] = 2.0 * rho_new[i] - u.rho[i] - cfg.tau * diff;
  }
  for (int q = 0; q < p.grid.dim; ++q)
    for (std::size_t f = 0; f < u.m.comp[q].size(); ++f)
      u.m_bar.comp[q][f] = 2.0 * m_new.comp[q][f] - u.m.comp[q][f];

  u.rho = std::move(rho_new);
  u.m = std::move(m_new);
}

SaddleResult solve_saddle(const DensityField& rho_prev,
                          const GradientFlowProblem& p,
                          const SolverConfig& cfg, double dt,
                          SaddleWorkspace* ws) {
  check_conforms(rho_prev, p.grid, "solve_saddle");
  if (cfg.tau <= 0.0 || cfg.sigma <= 0.0 || cfg.tolerance <= 0.0)
    throw DomainError("solve_saddle: tau, sigma, tolerance must be positive");

  std::unique_ptr<SaddleWorkspace> local;
  if (!ws) {
    local = std::make_unique<SaddleWorkspace>(p);
    ws = local.get();
  }

  SaddleResult res;
  SaddleDiagnostics& diag = res.diag;
  diag.stepsize_bound_value = stepsize_bound(p.box, rho_prev, p.mobility);
  if (cfg.check_stepsize &&
      cfg.tau * cfg.sigma > diag.stepsize_bound_value * (1.0 + 1e-12)) {
    diag.stepsize_warning = true;
    std::fprintf(stderr,
                 "[wgf] warning: tau*sigma = %.6g exceeds the product bound "
                 "%.6g; cocoercivity is not guaranteed\n",
                 cfg.tau * cfg.sigma, diag.stepsize_bound_value);
  }

  const bool split = splitting_active(cfg, p);
  PrimalState u;
  if (cfg.cold_start) {
    u.rho = make_density(p.grid);
    ws->has_duals = false;
  } else {
    u.rho = rho_prev;
  }
  u.m = make_momentum(p.grid);
  u.rho_bar = u.rho;
  u.m_bar = u.m;

  if (!ws->has_duals) {
    ws->duals.phi = make_density(p.grid);
    ws->duals.psi = make_cell_vector(p.grid);
    if (split) {
      // Seed the conjugate dual at its stationary value dt * U'(rho_prev);
      // for stiff potentials this keeps the backward solve on the branch
      // anchored at the density from the very first ascent step. The inset
      // caps the seed magnitude so the first primal kicks tau*mu stay O(1).
      ws->duals.mu = make_density(p.grid);
      if (!cfg.cold_start) {
        double inset = 2.5e-3 * (p.box.hi - p.box.lo);
        DensityField clamped = rho_prev;
        for (double& v : clamped.values)
          v = std::clamp(v, p.box.lo + inset, p.box.hi - inset);
        try {
          DensityField ug;
          p.energy.split->u_grad(clamped, p.grid, ug);
          // the seed selects the branch; its magnitude is capped so the
          // first primal kicks stay moderate
          double cap = 4.0 / cfg.tau;
          for (std::size_t i = 0; i < ug.size(); ++i)
            ws->duals.mu->values[i] = std::clamp(dt * ug[i], -cap, cap);
        } catch (const Error&) {
          // fall back to the zero initialization
          for (double& v : ws->duals.mu->values) v = 0.0;
        }
      }
    } else {
      ws->duals.mu.reset();
    }
    ws->has_duals = true;
  } else if (split && !ws->duals.mu) {
    ws->duals.mu = make_density(p.grid);
  }

  DensityField rho_old;
  MomentumField m_old;
  diag.rel_change_history.reserve(256);
  for (int it = 0; it < cfg.iter_max; ++it) {
    rho_old = u.rho;
    m_old = u.m;

    dual_update(u, rho_prev, cfg, p, dt, ws->duals);
    primal_update(u, ws->duals, rho_prev, cfg, p, dt, ws->projector);
    diag.pdas_iters += ws->projector.stats().active_set_iters;
    diag.pcg_iters += ws->projector.stats().pcg_iters_total;

    double dn = 0.0, un = 0.0;
    for (std::size_t i = 0; i < u.rho.size(); ++i) {
      double d = u.rho[i] - rho_old[i];
      dn += d * d;
      un += u.rho[i] * u.rho[i];
    }
    for (int q = 0; q < p.grid.dim; ++q)
      for (std::size_t f = 0; f < u.m.comp[q].size(); ++f) {
        double d = u.m.comp[q][f] - m_old.comp[q][f];
        dn += d * d;
        un += u.m.comp[q][f] * u.m.comp[q][f];
      }
    double rel = un > 0.0 ? std::sqrt(dn / un)
                          : (dn > 0.0 ? std::numeric_limits<double>::infinity()
                                      : 0.0);
    diag.rel_change_history.push_back(rel);
    diag.iters = it + 1;
    diag.final_rel_change = rel;
    if (rel <= cfg.tolerance) {
      diag.converged = true;
      break;
    }
  }

  diag.action = action_value(u.rho, rho_prev, u.m, p.mobility, p.grid);
  res.rho = std::move(u.rho);
  res.m = std::move(u.m);
  return res;
}

}  // namespace wgf
