#include "wgf/grid.hpp"

#include <cassert>
#include <string>

#include "wgf/errors.hpp"

namespace wgf {

DensityField make_density(const GridSpec& g, double fill) {
  DensityField r;
  r.values.assign(g.num_cells(), fill);
  return r;
}

MomentumField make_momentum(const GridSpec& g, double fill) {
  MomentumField m;
  m.dim = g.dim;
  m.comp[0].assign(g.faces_per_axis(), fill);
  if (g.dim == 2) m.comp[1].assign(g.faces_per_axis(), fill);
  return m;
}

CellVectorField make_cell_vector(const GridSpec& g, double fill) {
  CellVectorField w;
  w.dim = g.dim;
  w.comp[0].assign(g.num_cells(), fill);
  if (g.dim == 2) w.comp[1].assign(g.num_cells(), fill);
  return w;
}

void check_conforms(const DensityField& r, const GridSpec& g,
                    const char* where) {
  if (r.values.size() != g.num_cells())
    throw DimensionError(std::string(where) + ": density field has " +
                         std::to_string(r.values.size()) + " cells, grid has " +
                         std::to_string(g.num_cells()));
}

void check_conforms(const MomentumField& m, const GridSpec& g,
                    const char* where) {
  bool ok = m.dim == g.dim && m.comp[0].size() == g.faces_per_axis() &&
            (g.dim == 1 || m.comp[1].size() == g.faces_per_axis());
  if (!ok)
    throw DimensionError(std::string(where) +
                         ": momentum field does not conform to grid");
}

void check_conforms(const CellVectorField& w, const GridSpec& g,
                    const char* where) {
  bool ok = w.dim == g.dim && w.comp[0].size() == g.num_cells() &&
            (g.dim == 1 || w.comp[1].size() == g.num_cells());
  if (!ok)
    throw DimensionError(std::string(where) +
                         ": cell vector field does not conform to grid");
}

void apply_div(const MomentumField& m, const GridSpec& g, DensityField& out) {
  check_conforms(m, g, "apply_div");
  out.values.resize(g.num_cells());
  const int n = g.n;
  const double ih = 1.0 / g.h;
  if (g.dim == 1) {
    const auto& mx = m.comp[0];
    for (int i = 0; i < n; ++i) {
      double right = (i <= n - 2) ? mx[i] : 0.0;
      double left = (i >= 1) ? mx[i - 1] : 0.0;
      out.values[i] = ih * (right - left);
    }
  } else {
    const auto& mx = m.comp[0];
    const auto& my = m.comp[1];
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        double rx = (i <= n - 2) ? mx[(std::size_t)j * (n - 1) + i] : 0.0;
        double lx = (i >= 1) ? mx[(std::size_t)j * (n - 1) + i - 1] : 0.0;
        double ry = (j <= n - 2) ? my[(std::size_t)j * n + i] : 0.0;
        double ly = (j >= 1) ? my[(std::size_t)(j - 1) * n + i] : 0.0;
        out.values[g.cell_index(i, j)] = ih * ((rx - lx) + (ry - ly));
      }
    }
  }
}

DensityField apply_div(const MomentumField& m, const GridSpec& g) {
  DensityField out;
  apply_div(m, g, out);
  return out;
}

void apply_div_adjoint(const DensityField& r, const GridSpec& g,
                       MomentumField& out) {
  check_conforms(r, g, "apply_div_adjoint");
  out.dim = g.dim;
  out.comp[0].resize(g.faces_per_axis());
  if (g.dim == 2) out.comp[1].resize(g.faces_per_axis());
  const int n = g.n;
  const double ih = 1.0 / g.h;
  if (g.dim == 1) {
    for (int f = 0; f < n - 1; ++f)
      out.comp[0][f] = ih * (r.values[f] - r.values[f + 1]);
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n - 1; ++i)
        out.comp[0][(std::size_t)j * (n - 1) + i] =
            ih * (r.values[g.cell_index(i, j)] -
                  r.values[g.cell_index(i + 1, j)]);
    for (int j = 0; j < n - 1; ++j)
      for (int i = 0; i < n; ++i)
        out.comp[1][(std::size_t)j * n + i] =
            ih * (r.values[g.cell_index(i, j)] -
                  r.values[g.cell_index(i, j + 1)]);
  }
}

MomentumField apply_div_adjoint(const DensityField& r, const GridSpec& g) {
  MomentumField out;
  apply_div_adjoint(r, g, out);
  return out;
}

void apply_avg(const MomentumField& m, const GridSpec& g,
               CellVectorField& out) {
  check_conforms(m, g, "apply_avg");
  out.dim = g.dim;
  out.comp[0].resize(g.num_cells());
  if (g.dim == 2) out.comp[1].resize(g.num_cells());
  const int n = g.n;
  if (g.dim == 1) {
    const auto& mx = m.comp[0];
    for (int i = 0; i < n; ++i) {
      double right = (i <= n - 2) ? mx[i] : 0.0;
      double left = (i >= 1) ? mx[i - 1] : 0.0;
      out.comp[0][i] = 0.5 * (right + left);
    }
  } else {
    const auto& mx = m.comp[0];
    const auto& my = m.comp[1];
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        double rx = (i <= n - 2) ? mx[(std::size_t)j * (n - 1) + i] : 0.0;
        double lx = (i >= 1) ? mx[(std::size_t)j * (n - 1) + i - 1] : 0.0;
        double ry = (j <= n - 2) ? my[(std::size_t)j * n + i] : 0.0;
        double ly = (j >= 1) ? my[(std::size_t)(j - 1) * n + i] : 0.0;
        out.comp[0][g.cell_index(i, j)] = 0.5 * (rx + lx);
        out.comp[1][g.cell_index(i, j)] = 0.5 * (ry + ly);
      }
    }
  }
}

CellVectorField apply_avg(const MomentumField& m, const GridSpec& g) {
  CellVectorField out;
  apply_avg(m, g, out);
  return out;
}

void apply_avg_adjoint(const CellVectorField& w, const GridSpec& g,
                       MomentumField& out) {
  check_conforms(w, g, "apply_avg_adjoint");
  out.dim = g.dim;
  out.comp[0].resize(g.faces_per_axis());
  if (g.dim == 2) out.comp[1].resize(g.faces_per_axis());
  const int n = g.n;
  if (g.dim == 1) {
    for (int f = 0; f < n - 1; ++f)
      out.comp[0][f] = 0.5 * (w.comp[0][f] + w.comp[0][f + 1]);
  } else {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n - 1; ++i)
        out.comp[0][(std::size_t)j * (n - 1) + i] =
            0.5 * (w.comp[0][g.cell_index(i, j)] +
                   w.comp[0][g.cell_index(i + 1, j)]);
    for (int j = 0; j < n - 1; ++j)
      for (int i = 0; i < n; ++i)
        out.comp[1][(std::size_t)j * n + i] =
            0.5 * (w.comp[1][g.cell_index(i, j)] +
                   w.comp[1][g.cell_index(i, j + 1)]);
  }
}

MomentumField apply_avg_adjoint(const CellVectorField& w, const GridSpec& g) {
  MomentumField out;
  apply_avg_adjoint(w, g, out);
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot(const MomentumField& a, const MomentumField& b) {
  double s = dot(a.comp[0], b.comp[0]);
  if (a.dim == 2) s += dot(a.comp[1], b.comp[1]);
  return s;
}

double norm2_squared(const std::vector<double>& a) { return dot(a, a); }

double norm2_squared(const MomentumField& a) { return dot(a, a); }

}  // namespace wgf
