#ifndef WGF_PROX_HPP
#define WGF_PROX_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "wgf/grid.hpp"
#include "wgf/mobility.hpp"
#include "wgf/spectral.hpp"

namespace wgf {

// ---------------------------------------------------------------------------
// Pointwise projection onto the dual cone K = { (phi, psi) : phi + |psi|^2/2 <= 0 }

struct ParabolaPoint {
  double phi = 0.0;
  std::array<double, 2> psi = {0.0, 0.0};
  int dim = 1;
};

/// Euclidean projection onto K. Feasible points are returned unchanged;
/// otherwise phi = phi0 - lam, psi = psi0 / (1 + lam) with lam the largest
/// real root of (1+lam)^2 (phi0 - lam) + |psi0|^2/2 = 0.
ParabolaPoint project_parabola(const ParabolaPoint& p0);

/// In-place projection of a full dual field, cell by cell.
void project_parabola_field(DensityField& phi, CellVectorField& psi);

// ---------------------------------------------------------------------------
// Proximal operator of the conjugate energy part (the mu dual variable)

/// Backward handling of the ill-conditioned energy part U through its
/// conjugate: solves argmin_mu sigma dt U*(mu/dt) + ||mu - mu0||^2 / 2,
/// either directly (closed-form conjugate) or through Moreau's identity
///   prox(mu0) = mu0 - sigma w,  dt U'(w) + sigma w = mu0.
class ConjugateProx {
 public:
  virtual ~ConjugateProx() = default;
  /// `w_guess` optionally seeds the inner iteration with an approximation
  /// of the primal density (used by branch-tracking solvers); pointwise and
  /// spectral solvers ignore it.
  virtual void prox(const DensityField& mu0, double sigma, double dt,
                    const GridSpec& g, DensityField& out,
                    const DensityField* w_guess = nullptr) = 0;
};

/// U(rho) = sum rho ln rho - rho, U*(mu) = sum exp(mu); pointwise Newton on
/// the closed-form optimality equation sigma exp(mu/dt) + mu = mu0.
class EntropyConjugateProx : public ConjugateProx {
 public:
  void prox(const DensityField& mu0, double sigma, double dt,
            const GridSpec& g, DensityField& out,
            const DensityField* w_guess = nullptr) override;
};

/// U known through a pointwise gradient s -> U'(s) on (lo, hi); Moreau route
/// with a bracketed damped Newton per cell, initial guess mu0/sigma.
class PointwiseNewtonProx : public ConjugateProx {
 public:
  PointwiseNewtonProx(std::function<double(double)> uprime,
                      std::function<double(double)> uprime_deriv, double lo,
                      double hi)
      : uprime_(std::move(uprime)),
        uprime_deriv_(std::move(uprime_deriv)),
        lo_(lo),
        hi_(hi) {}
  void prox(const DensityField& mu0, double sigma, double dt,
            const GridSpec& g, DensityField& out,
            const DensityField* w_guess = nullptr) override;

 private:
  std::function<double(double)> uprime_, uprime_deriv_;
  double lo_, hi_;
};

/// U quadratic with U' acting spectrally on the negative Laplacian,
/// U' = Op with symbol s(lam); Moreau route with one exact spectral solve.
class SpectralQuadraticProx : public ConjugateProx {
 public:
  SpectralQuadraticProx(std::function<double(double)> symbol, SpectralBC bc)
      : symbol_(std::move(symbol)), bc_(bc) {}
  void prox(const DensityField& mu0, double sigma, double dt,
            const GridSpec& g, DensityField& out,
            const DensityField* w_guess = nullptr) override;

 private:
  std::function<double(double)> symbol_;
  SpectralBC bc_;
  std::unique_ptr<SpectralSolver> solver_;
};

/// U known through a cell-coupled gradient
///   G(w)_i = (w_i (w_i^2 - 1) - eps^2 (Lap w)_i) / (1 - w_i^2)^2
/// (doubly degenerate interface model). Moreau route with a damped Newton
/// whose linear solves run BiCGStab preconditioned by a DCT-diagonalized
/// shifted Laplacian.
///
/// The quotient potential is non-convex with poles at +-1, so the
/// stationarity equation has several root branches; the solver follows the
/// branch anchored at the primal density (w_guess on the first call, then
/// its own previous solution). Instances keep that state, so one instance
/// serves one solve sequence.
class CoupledNewtonProx : public ConjugateProx {
 public:
  /// best_effort bounds the work instead of erroring: the potential is
  /// non-convex (poles at +-1), and across an interface the shifted
  /// stationarity equation passes through a band with no same-branch root,
  /// so the backward solve is a fixed number of damped sweeps there.
  CoupledNewtonProx(double eps2, bool best_effort = false,
                    int max_sweeps = 200)
      : eps2_(eps2), best_effort_(best_effort), max_sweeps_(max_sweeps) {}
  void prox(const DensityField& mu0, double sigma, double dt,
            const GridSpec& g, DensityField& out,
            const DensityField* w_guess = nullptr) override;

 private:
  double eps2_;
  bool best_effort_ = false;
  int max_sweeps_ = 200;
  std::unique_ptr<SpectralSolver> solver_;
  DensityField w_prev_;
  bool has_state_ = false;
};

/// Dispatch helper matching the solver's call site.
DensityField prox_conjugate_mu(const DensityField& mu0, double sigma,
                               double dt, ConjugateProx& u_model,
                               const GridSpec& g,
                               const DensityField* w_guess = nullptr);

/// Pointwise prox of scale * (rho ln rho - rho): solves
/// scale ln w + w = x0 per cell. Used by the Moreau-identity checks.
DensityField prox_entropy_primal(const DensityField& x0, double scale);

// ---------------------------------------------------------------------------
// Projection onto D = { rho - rho_prev + A m = 0, beta0 <= rho <= beta1 }

struct BoxBounds {
  double lo = 0.0;
  double hi = 1.0;
};

/// Active lower/upper cells plus multipliers, carried between calls as a
/// warm start for the primal-dual active set loop.
struct ActiveSetState {
  // 0 inactive, 1 at lower bound, 2 at upper bound
  std::vector<std::uint8_t> tag;
  std::vector<double> eta;     // multiplier of the continuity constraint
  std::vector<double> lambda;  // box multiplier, zero on the inactive set

  void reset(std::size_t cells) {
    tag.assign(cells, 0);
    eta.assign(cells, 0.0);
    lambda.assign(cells, 0.0);
  }
  std::size_t active_count() const {
    std::size_t a = 0;
    for (auto t : tag) a += (t != 0);
    return a;
  }
};

struct PrimalProxStats {
  int active_set_iters = 0;
  int pcg_iters_total = 0;
};

/// Reusable buffers for the QP projection (one per solver instance).
class PrimalProjector {
 public:
  PrimalProjector(const GridSpec& g, BoxBounds box);

  /// Exact minimizer of ||rho-rho0||^2/2 + ||m-m0||^2/2 over D, by the
  /// primal-dual active set method; each inner Schur solve uses PCG with a
  /// block-Jacobi preconditioner whose grid block is (I + A A^T)^{-1}.
  void project(const DensityField& rho0, const MomentumField& m0,
               const DensityField& rho_prev, DensityField& rho,
               MomentumField& m);

  ActiveSetState& state() { return state_; }
  const PrimalProxStats& stats() const { return stats_; }
  const BoxBounds& box() const { return box_; }

 private:
  GridSpec grid_;
  BoxBounds box_;
  SpectralSolver dct_;
  ActiveSetState state_;
  PrimalProxStats stats_;
  // scratch
  std::vector<double> rhs1_, r1_, p1_, z1_, ap1_;
  std::vector<double> rhs2_, r2_, p2_, z2_, ap2_;
  std::vector<double> eta_, lam_;
  std::vector<std::size_t> active_;
  MomentumField mscratch_;
  DensityField dscratch_;

  int pcg_solve(const DensityField& rho0, const MomentumField& m0,
                const DensityField& rho_prev);
};

/// One-shot convenience wrapper around PrimalProjector.
void prox_primal(const DensityField& rho0, const MomentumField& m0,
                 const DensityField& rho_prev, BoxBounds box,
                 const GridSpec& g, ActiveSetState& warm, DensityField& rho,
                 MomentumField& m);

// ---------------------------------------------------------------------------
// Transport action

/// Discrete action sum_i f(M_i, (I m)_i) h^d with the one-homogeneous
/// integrand f(M, m) = |m|^2 / (2M) for M > 0, 0 at (0,0), +inf otherwise.
/// Returns +inf (std::numeric_limits infinity) when any cell is infeasible.
double action_value(const DensityField& rho, const DensityField& rho_prev,
                    const MomentumField& m, const MobilityModel& mob,
                    const GridSpec& g);

}  // namespace wgf

#endif  // WGF_PROX_HPP
