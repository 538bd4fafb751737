#include "wgf/jko.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wgf/errors.hpp"

namespace wgf {

int TimeLoopSpec::num_steps() const {
  if (dt <= 0.0) throw DomainError("TimeLoopSpec: dt must be positive");
  if (snapshot_every < 1)
    throw DomainError("TimeLoopSpec: snapshot stride must be >= 1");
  double steps = t_end / dt;
  if (steps > 50'000'000.0)
    throw DomainError("TimeLoopSpec: step budget exceeded");
  return static_cast<int>(std::llround(steps));
}

namespace {

double diagnostic_energy_of(const GradientFlowProblem& p,
                            const DensityField& rho) {
  if (p.diagnostic_energy) return p.diagnostic_energy(rho, p.grid);
  if (p.energy.has_value()) return p.energy.value(rho, p.grid);
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

RunResult run(const DensityField& rho0, const GradientFlowProblem& p,
              const SolverConfig& cfg, const TimeLoopSpec& loop,
              const StepSink& sink) {
  check_conforms(rho0, p.grid, "jko::run");
  for (std::size_t i = 0; i < rho0.size(); ++i)
    if (rho0[i] < p.box.lo - 1e-12 || rho0[i] > p.box.hi + 1e-12)
      throw DomainError("jko::run: initial density violates the box",
                        static_cast<long>(i));

  const int steps = loop.num_steps();
  const double hd = p.grid.cell_volume();

  RunResult out;
  out.series.reserve(steps);
  if (sink.on_snapshot) sink.on_snapshot(0, 0.0, rho0);

  DensityField rho = rho0;
  SaddleWorkspace ws(p);
  for (int n = 0; n < steps; ++n) {
    SaddleResult r;
    try {
      r = solve_saddle(rho, p, cfg, loop.dt, &ws);
    } catch (const Error& e) {
      throw ConvergenceError("step " + std::to_string(n + 1) + ": " +
                             e.what(), 0.0);
    }
    rho = std::move(r.rho);

    StepDiagnostics d;
    d.step = n + 1;
    d.time = (n + 1) * loop.dt;
    d.energy = diagnostic_energy_of(p, rho);
    double mass = 0.0, lo = rho[0], hi = rho[0];
    for (double v : rho.values) {
      mass += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    d.mass = mass * hd;
    d.min_rho = lo;
    d.max_rho = hi;
    d.pdfb_iters = r.diag.iters;
    d.action = r.diag.action;
    d.converged = r.diag.converged;
    d.stepsize_warning = r.diag.stepsize_warning;
    out.series.push_back(d);
    if (sink.on_step) sink.on_step(d);
    bool last = (n + 1 == steps);
    if (sink.on_snapshot && ((n + 1) % loop.snapshot_every == 0 || last))
      sink.on_snapshot(n + 1, d.time, rho);
  }
  out.final_rho = std::move(rho);
  return out;
}

StructureReport check_structure(const std::vector<StepDiagnostics>& series,
                                double tolerance, const BoxBounds& box,
                                double initial_energy, double initial_mass) {
  StructureReport rep;
  double e_prev = initial_energy;
  for (const auto& d : series) {
    if (!std::isnan(d.energy) && !std::isnan(e_prev)) {
      double slack = 10.0 * tolerance * (1.0 + std::abs(e_prev));
      double dt = d.step > 0 ? d.time / d.step : 1.0;
      double lhs = d.energy;
      if (d.action > 0.0 && std::isfinite(d.action)) lhs += d.action / dt;
      if (lhs > e_prev + slack)
        rep.violations.push_back({d.step, "energy", lhs - e_prev});
    }
    double drift = std::abs(d.mass - initial_mass) /
                   std::max(std::abs(initial_mass), 1e-300);
    if (drift > 1e-10) rep.violations.push_back({d.step, "mass", drift});
    if (d.min_rho < box.lo - 1e-12)
      rep.violations.push_back({d.step, "bounds", box.lo - d.min_rho});
    if (d.max_rho > box.hi + 1e-12)
      rep.violations.push_back({d.step, "bounds", d.max_rho - box.hi});
    e_prev = d.energy;
  }
  return rep;
}

}  // namespace wgf
