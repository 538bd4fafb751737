#ifndef WGF_PRESETS_HPP
#define WGF_PRESETS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wgf/jko.hpp"
#include "wgf/problem.hpp"

namespace wgf {

/// A ready-to-run benchmark configuration: problem builder, initial state,
/// default time loop and solver parameters, and (when known) a reference
/// solution. Presets are immutable descriptions; problems are instantiated
/// per grid so the resolution can be overridden.
struct Preset {
  std::string name;
  int dim = 1;
  std::array<double, 2> origin = {0.0, 0.0};
  double domain_length = 1.0;  // per axis
  int default_n = 1;
  BoxBounds box{0.0, 1.0};
  RhoBC rho_bc = RhoBC::None;
  std::string mobility_family;
  TimeLoopSpec loop;
  SolverConfig solver;
  std::uint64_t default_seed = 12345;

  /// Semi-implicit variant (effective mobility affine in the unknown).
  bool semi_implicit_available = false;
  double semi_dt = 0.0;     // 0 = keep loop.dt
  double semi_tau = 0.0;    // 0 = keep solver.tau
  double semi_sigma = 0.0;  // 0 = keep solver.sigma

  std::function<EnergyModel()> make_energy;
  std::function<double(const DensityField&, const GridSpec&)>
      diagnostic_energy;  // optional tracking functional
  std::function<DensityField(const GridSpec&, std::uint64_t)> initial;
  std::function<double(double, double, double)> reference;  // (x, y, t)

  GridSpec make_grid() const;
  GridSpec make_grid_n(int n) const;
  GridSpec make_grid_h(double h) const;
  GradientFlowProblem make_problem(const GridSpec& g, MobilityMode mode,
                                   BoxBounds box_override) const;
  GradientFlowProblem make_problem(const GridSpec& g) const;
};

/// Names accepted by load_preset (and by the CLI).
const std::vector<std::string>& preset_names();

Preset load_preset(const std::string& name);

/// Self-similar compactly supported solution of the quadratic porous-medium
/// flow, offset t0 = 1e-3:
///   rho(x,t) = (t+t0)^(-1/3) ( (3/16)^(1/3) - (t+t0)^(-2/3) x^2 / 12 )_+
double barenblatt(double x, double t);

}  // namespace wgf

#endif  // WGF_PRESETS_HPP
