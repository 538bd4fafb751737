#ifndef WGF_PROBLEM_HPP
#define WGF_PROBLEM_HPP

#include <functional>

#include "wgf/energy.hpp"
#include "wgf/errors.hpp"
#include "wgf/grid.hpp"
#include "wgf/mobility.hpp"
#include "wgf/prox.hpp"

namespace wgf {

/// A gradient-flow problem instance: grid, transport coefficient, free
/// energy, the admissible density interval, and the boundary handling used
/// by the energy stencils.
struct GradientFlowProblem {
  GridSpec grid;
  MobilityModel mobility;
  EnergyModel energy;
  BoxBounds box{0.0, 1.0};
  RhoBC rho_bc = RhoBC::None;
  /// Optional functional tracked in the step diagnostics when the model has
  /// no energy value of its own (or when a different quantity is of
  /// interest, e.g. the interface energy of non-variational models).
  std::function<double(const DensityField&, const GridSpec&)>
      diagnostic_energy;
};

inline DensityField energy_grad(const DensityField& rho,
                                const GradientFlowProblem& p) {
  DensityField out;
  p.energy.grad(rho, p.grid, out);
  return out;
}

inline double energy_value(const DensityField& rho,
                           const GradientFlowProblem& p) {
  if (!p.energy.has_value())
    throw DomainError("energy_value: model '" + p.energy.name +
                      "' provides only a gradient");
  return p.energy.value(rho, p.grid);
}

}  // namespace wgf

#endif  // WGF_PROBLEM_HPP
