#ifndef WGF_MOBILITY_HPP
#define WGF_MOBILITY_HPP

#include <functional>
#include <string>
#include <utility>

#include "wgf/grid.hpp"

namespace wgf {

enum class MobilityMode { Implicit, SemiImplicit };

/// Mobility coefficient M(rho) with M >= 0 on the feasible interval
/// [beta0, beta1]. In semi-implicit mode the transport coefficient is
/// replaced by an effective mobility that is affine in the unknown,
///   M_eff(rho; rho_prev) = slope(rho_prev) * rho + intercept(rho_prev),
/// e.g. rho (1 - rho_prev) for M = rho (1 - rho), (rho_prev)^2 rho for rho^3.
struct MobilityModel {
  std::string name;
  std::function<double(double)> eval;   // M
  std::function<double(double)> deriv;  // M'
  double beta0 = 0.0;
  double beta1 = 1.0;
  MobilityMode mode = MobilityMode::Implicit;
  std::function<double(double)> slope;      // semi-implicit only
  std::function<double(double)> intercept;  // semi-implicit only

  bool semi_implicit_available() const { return static_cast<bool>(slope); }
  double clamp(double s) const {
    return s < beta0 ? beta0 : (s > beta1 ? beta1 : s);
  }
};

/// Evaluates the transport coefficient of the single-step scheme and its
/// derivative with respect to the unknown density.
///
/// Implicit:       values_i = M(s_i),  derivs_i = M'(s_i)/2,
///                 with s_i = (rho_prev_i + rho_i)/2 clamped to the box.
/// Semi-implicit:  values_i = M_eff(rho_i; rho_prev_i), derivs_i = slope.
void mobility_midpoint(const DensityField& rho, const DensityField& rho_prev,
                       const MobilityModel& mob, DensityField& values,
                       DensityField& derivs);
std::pair<DensityField, DensityField> mobility_midpoint(
    const DensityField& rho, const DensityField& rho_prev,
    const MobilityModel& mob);

/// Built-in mobility families, selected by the same names the presets use.
///   linear            M = rho
///   saturation        M = rho (1 - rho)         (semi-implicit available)
///   cubic             M = rho^3                 (semi-implicit available)
///   degenerate_quad   M = 1 - rho^2
///   doubly_degenerate M = (1 - rho^2)^2
MobilityModel make_mobility(const std::string& family, double beta0,
                            double beta1);

}  // namespace wgf

#endif  // WGF_MOBILITY_HPP
