#include "wgf/mobility.hpp"

#include "wgf/errors.hpp"

namespace wgf {

void mobility_midpoint(const DensityField& rho, const DensityField& rho_prev,
                       const MobilityModel& mob, DensityField& values,
                       DensityField& derivs) {
  if (rho.size() != rho_prev.size())
    throw DimensionError("mobility_midpoint: field sizes disagree");
  const std::size_t n = rho.size();
  values.values.resize(n);
  derivs.values.resize(n);
  if (mob.mode == MobilityMode::Implicit) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = mob.clamp(0.5 * (rho_prev[i] + rho[i]));
      values[i] = mob.eval(s);
      derivs[i] = 0.5 * mob.deriv(s);
    }
  } else {
    if (!mob.semi_implicit_available())
      throw DomainError("mobility_midpoint: semi-implicit mode not defined "
                        "for mobility '" + mob.name + "'");
    for (std::size_t i = 0; i < n; ++i) {
      double rp = mob.clamp(rho_prev[i]);
      double r = mob.clamp(rho[i]);
      double a = mob.slope(rp);
      values[i] = a * r + mob.intercept(rp);
      derivs[i] = a;
    }
  }
}

std::pair<DensityField, DensityField> mobility_midpoint(
    const DensityField& rho, const DensityField& rho_prev,
    const MobilityModel& mob) {
  DensityField v, d;
  mobility_midpoint(rho, rho_prev, mob, v, d);
  return {std::move(v), std::move(d)};
}

MobilityModel make_mobility(const std::string& family, double beta0,
                            double beta1) {
  MobilityModel m;
  m.name = family;
  m.beta0 = beta0;
  m.beta1 = beta1;
  if (family == "linear") {
    m.eval = [](double r) { return r; };
    m.deriv = [](double) { return 1.0; };
  } else if (family == "saturation") {
    m.eval = [](double r) { return r * (1.0 - r); };
    m.deriv = [](double r) { return 1.0 - 2.0 * r; };
    m.slope = [](double rp) { return 1.0 - rp; };
    m.intercept = [](double) { return 0.0; };
  } else if (family == "cubic") {
    m.eval = [](double r) { return r * r * r; };
    m.deriv = [](double r) { return 3.0 * r * r; };
    m.slope = [](double rp) { return rp * rp; };
    m.intercept = [](double) { return 0.0; };
  } else if (family == "degenerate_quad") {
    m.eval = [](double r) { return 1.0 - r * r; };
    m.deriv = [](double r) { return -2.0 * r; };
  } else if (family == "doubly_degenerate") {
    m.eval = [](double r) {
      double q = 1.0 - r * r;
      return q * q;
    };
    m.deriv = [](double r) { return -4.0 * r * (1.0 - r * r); };
  } else {
    throw DomainError("make_mobility: unknown family '" + family + "'");
  }
  return m;
}

}  // namespace wgf
