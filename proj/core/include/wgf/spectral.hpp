#ifndef WGF_SPECTRAL_HPP
#define WGF_SPECTRAL_HPP

#include <functional>
#include <vector>

#include "wgf/grid.hpp"

namespace wgf {

enum class SpectralBC { Neumann, Periodic };

/// Diagonalizes functions of the (negative) discrete Laplacian on the grid.
///
/// Neumann: DCT-II basis cos(pi k (i+1/2)/n); eigenvalues of -Lap_h are
///   lam_k = (2/h^2)(1 - cos(pi k / n)) per axis, summed across axes in 2D.
/// Periodic: real DFT (halfcomplex) basis; lam_k = (2/h^2)(1 - cos(2 pi k/n)).
///
/// A A^T equals the negative Neumann Laplacian, so (I + s A A^T) solves and
/// the block-Jacobi preconditioner both reduce to a forward transform, a
/// diagonal scaling, and a backward transform.
///
/// Instances own their buffers; concurrent use of distinct instances is safe.
class SpectralSolver {
 public:
  SpectralSolver(const GridSpec& g, SpectralBC bc);

  /// out_i <- sum_k factor(lam(k)) rhat_k e_k(i), i.e. applies an arbitrary
  /// spectral multiplier of the negative Laplacian. in == out allowed.
  void apply_multiplier(const std::vector<double>& in, std::vector<double>& out,
                        const std::function<double(double)>& factor) const;

  /// Solves (a I + b (-Lap_h)) x = rhs. Requires a + b*lam > 0 on the spectrum.
  void solve_shifted_laplacian(const std::vector<double>& rhs,
                               std::vector<double>& x, double a,
                               double b) const;

  const GridSpec& grid() const { return grid_; }
  SpectralBC bc() const { return bc_; }

 private:
  GridSpec grid_;
  SpectralBC bc_;
  std::vector<double> eig_axis_;  // per-axis eigenvalue by array index
  double norm_;                   // forward*backward scaling of the transform
  void* plan_fwd_ = nullptr;      // fftw_plan, shared via process-wide cache
  void* plan_bwd_ = nullptr;
  mutable std::vector<double> buf_;
};

/// Solves (I + scale * A A^T) x = rhs to machine precision via the DCT
/// diagonalization above. scale > 0 (scale = 0 degenerates to the identity).
void solve_identity_plus_div_divT(const DensityField& rhs, const GridSpec& g,
                                  double scale, DensityField& x);
DensityField solve_identity_plus_div_divT(const DensityField& rhs,
                                          const GridSpec& g, double scale);

}  // namespace wgf

#endif  // WGF_SPECTRAL_HPP
