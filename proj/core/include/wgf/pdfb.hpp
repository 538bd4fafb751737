#ifndef WGF_PDFB_HPP
#define WGF_PDFB_HPP

#include <memory>
#include <optional>
#include <vector>

#include "wgf/problem.hpp"

namespace wgf {

/// Step sizes and stopping rule of the splitting iteration.
struct SolverConfig {
  double tau = 1.0;
  double sigma = 1.0;
  double tolerance = 1e-5;
  int iter_max = 100000;
  bool check_stepsize = true;
  /// Initialize u = 0, v = 0 instead of warm-starting from the previous
  /// minimizing-movement step.
  bool cold_start = false;
  /// Use the model's convex splitting (backward conjugate part) when the
  /// energy provides one.
  bool convex_splitting = true;
};

/// Primal iterate (rho, m) together with its reflection estimate.
struct PrimalState {
  DensityField rho;
  MomentumField m;
  DensityField rho_bar;
  MomentumField m_bar;
};

/// Dual iterate: (phi, psi) on the parabolic cone, plus mu when the convex
/// splitting is active.
struct DualStateFull {
  DensityField phi;
  CellVectorField psi;
  std::optional<DensityField> mu;
};

struct SaddleDiagnostics {
  int iters = 0;
  bool converged = false;
  double final_rel_change = 0.0;
  std::vector<double> rel_change_history;
  double action = 0.0;  // transport cost of the returned iterate
  bool stepsize_warning = false;
  double stepsize_bound_value = 0.0;
  long pdas_iters = 0;
  long pcg_iters = 0;
};

struct SaddleResult {
  DensityField rho;
  MomentumField m;
  SaddleDiagnostics diag;
};

/// Product step-size bound tau*sigma <= 1 / max{1, sup (dM_eff/drho)^2}.
/// Implicit mobility: the sup runs over midpoint arguments in [beta0,beta1]
/// (dense sampling, 1e4 points plus endpoints, of |M'(s)|/2). Semi-implicit:
/// the effective slope is exact per cell, so the sup runs over the cells of
/// rho_prev.
double stepsize_bound(const BoxBounds& box, const DensityField& rho_prev,
                      const MobilityModel& mob);

/// Persistent state reused across iterations and across time steps: the
/// active-set projector and the carried dual variables.
class SaddleWorkspace {
 public:
  SaddleWorkspace(const GradientFlowProblem& p);
  PrimalProjector projector;
  DualStateFull duals;
  bool has_duals = false;
};

/// Dual ascent with the mobility term linearized around the current iterate,
/// followed by the pointwise cone projection (and the conjugate prox of the
/// split part when active).
void dual_update(const PrimalState& u, const DensityField& rho_prev,
                 const SolverConfig& cfg, const GradientFlowProblem& p,
                 double dt, DualStateFull& v);

/// Primal gradient descent, projection onto the constraint set, and the
/// gradient-informed reflection estimate.
void primal_update(PrimalState& u, const DualStateFull& v,
                   const DensityField& rho_prev, const SolverConfig& cfg,
                   const GradientFlowProblem& p, double dt,
                   PrimalProjector& projector);

/// Runs the splitting iteration on one minimizing-movement step and returns
/// the final primal iterate. `ws` may be null (a fresh workspace is used).
/// Distinct calls on distinct problems/workspaces are independent; a single
/// workspace must not be shared across threads.
SaddleResult solve_saddle(const DensityField& rho_prev,
                          const GradientFlowProblem& p,
                          const SolverConfig& cfg, double dt,
                          SaddleWorkspace* ws = nullptr);

}  // namespace wgf

#endif  // WGF_PDFB_HPP
