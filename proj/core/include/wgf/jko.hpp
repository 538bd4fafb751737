#ifndef WGF_JKO_HPP
#define WGF_JKO_HPP

#include <functional>
#include <string>
#include <vector>

#include "wgf/pdfb.hpp"

namespace wgf {

struct TimeLoopSpec {
  double dt = 1e-3;
  double t_end = 1.0;
  int snapshot_every = 1;

  int num_steps() const;
};

struct StepDiagnostics {
  int step = 0;
  double time = 0.0;
  double energy = 0.0;        // NaN when no energy value is available
  double mass = 0.0;          // sum rho_i h^d
  double min_rho = 0.0;
  double max_rho = 0.0;
  int pdfb_iters = 0;
  double action = 0.0;        // discrete transport cost of the step
  bool converged = true;
  bool stepsize_warning = false;
};

struct StepSink {
  /// Called with the initial state (step 0) and then every snapshot stride
  /// plus the final step.
  std::function<void(int step, double time, const DensityField&)> on_snapshot;
  /// Called after every accepted step.
  std::function<void(const StepDiagnostics&)> on_step;
};

struct RunResult {
  DensityField final_rho;
  std::vector<StepDiagnostics> series;
};

/// Outer minimizing-movement loop, strictly sequential across steps; sink
/// callbacks run on the loop thread. Steps whose inner iteration hits
/// iter_max are accepted with converged=false in the diagnostics; hard
/// sub-solver failures are rethrown annotated with the step index.
RunResult run(const DensityField& rho0, const GradientFlowProblem& p,
              const SolverConfig& cfg, const TimeLoopSpec& loop,
              const StepSink& sink = {});

struct StructureViolation {
  int step;
  std::string kind;  // "energy", "mass", "bounds"
  double magnitude;
};

struct StructureReport {
  std::vector<StructureViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the dissipation chain E(rho^{n+1}) + action/dt <= E(rho^n) + slack
/// with slack = 10 tol (1 + |E(rho^n)|), mass conservation to 1e-10
/// relative, and the box bounds to 1e-12. Energy checks are skipped for
/// steps whose energy is NaN (models without an energy value).
StructureReport check_structure(const std::vector<StepDiagnostics>& series,
                                double tolerance, const BoxBounds& box,
                                double initial_energy, double initial_mass);

}  // namespace wgf

#endif  // WGF_JKO_HPP
