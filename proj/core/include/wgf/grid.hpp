#ifndef WGF_GRID_HPP
#define WGF_GRID_HPP

#include <array>
#include <cstddef>
#include <vector>

namespace wgf {

/// Uniform box grid covering Omega with n cells per axis of spacing h.
///
/// Data layout: cell (i) in 1D, cell (i,j) in 2D stored at j*n + i, i.e.
/// x-fastest row-major order. Momentum lives on interior faces only; the
/// normal flux on boundary faces is identically zero and carries no storage.
/// Interior faces along axis q are stored x-fastest as well:
///   axis 0: face between cells (i,j) and (i+1,j) at index j*(n-1) + i,
///   axis 1: face between cells (i,j) and (i,j+1) at index j*n + i.
struct GridSpec {
  int dim = 1;                           // 1 or 2
  int n = 1;                             // cells per axis
  double h = 1.0;                        // grid spacing
  std::array<double, 2> origin = {0, 0}; // lower-left corner of Omega

  std::size_t num_cells() const {
    return dim == 1 ? static_cast<std::size_t>(n)
                    : static_cast<std::size_t>(n) * n;
  }
  std::size_t faces_per_axis() const {
    return dim == 1 ? static_cast<std::size_t>(n - 1)
                    : static_cast<std::size_t>(n - 1) * n;
  }
  double cell_volume() const { return dim == 1 ? h : h * h; }
  double axis_length() const { return n * h; }

  std::size_t cell_index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * n + i;
  }
  double cell_center(int i) const { return origin[0] + (i + 0.5) * h; }
  std::array<double, 2> cell_center2(int i, int j) const {
    return {origin[0] + (i + 0.5) * h, origin[1] + (j + 0.5) * h};
  }

  bool operator==(const GridSpec& o) const {
    return dim == o.dim && n == o.n && h == o.h && origin == o.origin;
  }
};

/// Cell-centered scalar field (one value per volume).
struct DensityField {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Face-centered normal fluxes on interior faces, one array per axis.
struct MomentumField {
  int dim = 1;
  std::array<std::vector<double>, 2> comp;

  std::size_t faces_per_axis() const { return comp[0].size(); }
};

/// Cell-centered vector field (dim components per cell, component-major).
struct CellVectorField {
  int dim = 1;
  std::array<std::vector<double>, 2> comp;

  std::size_t size() const { return comp[0].size(); }
};

// All operator applications below are pure functions of their inputs and
// safe to call concurrently.
DensityField make_density(const GridSpec& g, double fill = 0.0);
MomentumField make_momentum(const GridSpec& g, double fill = 0.0);
CellVectorField make_cell_vector(const GridSpec& g, double fill = 0.0);

void check_conforms(const DensityField& r, const GridSpec& g,
                    const char* where);
void check_conforms(const MomentumField& m, const GridSpec& g,
                    const char* where);
void check_conforms(const CellVectorField& w, const GridSpec& g,
                    const char* where);

/// Discrete divergence: (A m)_i = (1/h) sum_q (m^q_{i+e_q/2} - m^q_{i-e_q/2}),
/// with zero substituted on boundary faces. Row sums telescope, so
/// sum_i (A m)_i = 0 up to floating-point rounding.
void apply_div(const MomentumField& m, const GridSpec& g, DensityField& out);
DensityField apply_div(const MomentumField& m, const GridSpec& g);

/// Adjoint of apply_div: <A m, r> = <m, A^T r> for all m, r.
void apply_div_adjoint(const DensityField& r, const GridSpec& g,
                       MomentumField& out);
MomentumField apply_div_adjoint(const DensityField& r, const GridSpec& g);

/// Face-to-cell averaging: component q at cell i is the mean of the two
/// face fluxes of axis q, with zero on boundary faces.
void apply_avg(const MomentumField& m, const GridSpec& g, CellVectorField& out);
CellVectorField apply_avg(const MomentumField& m, const GridSpec& g);

/// Adjoint of apply_avg: <I m, w> = <m, I^T w>.
void apply_avg_adjoint(const CellVectorField& w, const GridSpec& g,
                       MomentumField& out);
MomentumField apply_avg_adjoint(const CellVectorField& w, const GridSpec& g);

// Small dense-vector helpers shared by the solvers.
double dot(const std::vector<double>& a, const std::vector<double>& b);
double dot(const MomentumField& a, const MomentumField& b);
double norm2_squared(const std::vector<double>& a);
double norm2_squared(const MomentumField& a);

}  // namespace wgf

#endif  // WGF_GRID_HPP
