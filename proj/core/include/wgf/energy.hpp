#ifndef WGF_ENERGY_HPP
#define WGF_ENERGY_HPP

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "wgf/grid.hpp"

namespace wgf {

class ConjugateProx;  // defined in prox.hpp

/// Boundary handling for density stencils in the energy models. Momentum
/// always satisfies no-flux; this only affects Laplacians / gradients of rho.
enum class RhoBC { None, Neumann, Periodic };

/// Discrete free energy.
///
/// `grad` returns the chemical potential dE^_h/drho of the rescaled energy
/// E^_h = E_h / h^d; `value` (optional, diagnostics only) returns E_h itself.
/// Models whose energy is known only through its gradient leave `value`
/// unset. When a convex splitting E^_h = U + V is available, `split` holds
/// the forward part's gradient, the backward part handled through its
/// conjugate (ConjugateProx), and U's own gradient for consistency checks.
struct EnergyModel {
  std::string name;
  std::function<void(const DensityField&, const GridSpec&, DensityField&)>
      grad;
  std::function<double(const DensityField&, const GridSpec&)> value;  // E_h

  struct Split {
    std::function<void(const DensityField&, const GridSpec&, DensityField&)>
        v_grad;
    std::function<void(const DensityField&, const GridSpec&, DensityField&)>
        u_grad;
    std::shared_ptr<ConjugateProx> u_prox;
  };
  std::optional<Split> split;

  bool has_value() const { return static_cast<bool>(value); }
  bool has_split() const { return split.has_value(); }
};

// Stencil helpers shared by the models (and usable in tests).

/// Five-point Laplacian (three-point in 1D) with the requested closure:
/// Neumann mirrors the boundary cell, Periodic wraps.
void laplacian(const DensityField& rho, const GridSpec& g, RhoBC bc,
               DensityField& out);

/// Cell-centered central differences over 2h, periodic wrap (2D only).
void wide_gradient_periodic(const DensityField& rho, const GridSpec& g,
                            CellVectorField& out);

/// Adjoint-consistent central divergence over 2h, periodic wrap (2D only).
void wide_divergence_periodic(const CellVectorField& w, const GridSpec& g,
                              DensityField& out);

/// Face-based Dirichlet energy (eps^2/2) sum_faces ((drho)/h)^2 h^d, the
/// discrete counterpart of (eps^2/2) int |grad rho|^2.
double dirichlet_face_energy(const DensityField& rho, const GridSpec& g,
                             RhoBC bc, double eps2);

// Built-in energy models.

/// U(rho) = rho^2 internal energy (porous-medium benchmark).
EnergyModel make_quadratic_energy();

/// Gibbs-Boltzmann entropy plus external potential:
/// E_h = sum (rho ln rho - rho + V rho) h^d, with the entropy handled
/// backward through its conjugate sum exp(mu) when splitting is used.
EnergyModel make_entropy_potential_energy(
    std::function<double(std::array<double, 2>)> potential);

/// Pure Dirichlet energy, grad = -eps2 * Lap rho.
EnergyModel make_dirichlet_energy(double eps2, RhoBC bc);

/// Thin-film energy with intermolecular pressure P(rho):
///   kind 1: P = rho^-3 - eps rho^-4,  kind 2: P = rho^-3 - eps^6 rho^-9.
/// Split: U' = P handled backward pointwise, V' = -Lap rho forward.
EnergyModel make_thin_film_vdw_energy(int kind, double eps);

/// Double-well plus Dirichlet: grad = rho(rho^2-1) - eps^2 Lap rho.
EnergyModel make_double_well_dirichlet_energy(double eps2, RhoBC bc);

enum class AnisotropyKind { FourFold, EightFold, Omega };

/// Kobayashi-type anisotropic double-well energy with biharmonic
/// regularization (periodic boundary, 2D):
///   E^_h = sum 1/4 (rho^2-1)^2 + eps^2/2 gamma(p)^2 |grad_h rho|^2
///          + beta eps^2 / 2 (Lap_h rho)^2,
/// p = grad_h rho / sqrt(|grad_h rho|^2 + delta_p^2), delta_p = 1e-8.
/// Split: biharmonic part backward (spectral), the rest forward.
EnergyModel make_anisotropic_energy(AnisotropyKind kind, double alpha,
                                    double omega, double eps, double beta);

/// Surface-energy factor gamma(p) and its gradient for the anisotropic model
/// (exposed for tests).
double anisotropy_gamma(AnisotropyKind kind, double alpha, double omega,
                        double p1, double p2);

/// Doubly degenerate interface model: the potential field
///   (rho(rho^2-1) - eps^2 Lap rho) / (1 - rho^2)^2
/// defines the energy gradient; no closed-form energy value exists.
EnergyModel make_doubly_degenerate_potential(double eps2, RhoBC bc);

}  // namespace wgf

#endif  // WGF_ENERGY_HPP
