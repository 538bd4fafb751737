#include "wgf/energy.hpp"

#include <cmath>
#include <limits>

#include "wgf/errors.hpp"
#include "wgf/prox.hpp"

namespace wgf {

namespace {

inline int wrap(int i, int n) { return (i % n + n) % n; }
inline int mirror(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

}  // namespace

void laplacian(const DensityField& rho, const GridSpec& g, RhoBC bc,
               DensityField& out) {
  check_conforms(rho, g, "laplacian");
  if (bc == RhoBC::None)
    throw DomainError("laplacian: model requires a rho boundary condition");
  out.values.resize(g.num_cells());
  const int n = g.n;
  const double ih2 = 1.0 / (g.h * g.h);
  auto at1 = [&](int i) {
    int k = bc == RhoBC::Periodic ? wrap(i, n) : mirror(i, n);
    return rho.values[k];
  };
  if (g.dim == 1) {
    for (int i = 0; i < n; ++i)
      out.values[i] = ih2 * (at1(i - 1) - 2.0 * rho.values[i] + at1(i + 1));
  } else {
    auto at2 = [&](int i, int j) {
      int ii = bc == RhoBC::Periodic ? wrap(i, n) : mirror(i, n);
      int jj = bc == RhoBC::Periodic ? wrap(j, n) : mirror(j, n);
      return rho.values[g.cell_index(ii, jj)];
    };
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        out.values[g.cell_index(i, j)] =
            ih2 * (at2(i - 1, j) + at2(i + 1, j) + at2(i, j - 1) +
                   at2(i, j + 1) - 4.0 * rho.values[g.cell_index(i, j)]);
  }
}

void wide_gradient_periodic(const DensityField& rho, const GridSpec& g,
                            CellVectorField& out) {
  check_conforms(rho, g, "wide_gradient_periodic");
  if (g.dim != 2)
    throw DimensionError("wide_gradient_periodic: 2D grids only");
  const int n = g.n;
  const double i2h = 1.0 / (2.0 * g.h);
  out.dim = 2;
  out.comp[0].resize(g.num_cells());
  out.comp[1].resize(g.num_cells());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      out.comp[0][g.cell_index(i, j)] =
          i2h * (rho.values[g.cell_index(wrap(i + 1, n), j)] -
                 rho.values[g.cell_index(wrap(i - 1, n), j)]);
      out.comp[1][g.cell_index(i, j)] =
          i2h * (rho.values[g.cell_index(i, wrap(j + 1, n))] -
                 rho.values[g.cell_index(i, wrap(j - 1, n))]);
    }
}

void wide_divergence_periodic(const CellVectorField& w, const GridSpec& g,
                              DensityField& out) {
  check_conforms(w, g, "wide_divergence_periodic");
  if (g.dim != 2)
    throw DimensionError("wide_divergence_periodic: 2D grids only");
  const int n = g.n;
  const double i2h = 1.0 / (2.0 * g.h);
  out.values.resize(g.num_cells());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      out.values[g.cell_index(i, j)] =
          i2h * (w.comp[0][g.cell_index(wrap(i + 1, n), j)] -
                 w.comp[0][g.cell_index(wrap(i - 1, n), j)]) +
          i2h * (w.comp[1][g.cell_index(i, wrap(j + 1, n))] -
                 w.comp[1][g.cell_index(i, wrap(j - 1, n))]);
}

double dirichlet_face_energy(const DensityField& rho, const GridSpec& g,
                             RhoBC bc, double eps2) {
  check_conforms(rho, g, "dirichlet_face_energy");
  const int n = g.n;
  const double hd = g.cell_volume();
  const double ih2 = 1.0 / (g.h * g.h);
  double e = 0.0;
  auto face = [&](double a, double b) {
    double d = b - a;
    return d * d * ih2;
  };
  if (g.dim == 1) {
    for (int i = 0; i + 1 < n; ++i) e += face(rho.values[i], rho.values[i + 1]);
    if (bc == RhoBC::Periodic) e += face(rho.values[n - 1], rho.values[0]);
  } else {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i + 1 < n; ++i)
        e += face(rho.values[g.cell_index(i, j)],
                  rho.values[g.cell_index(i + 1, j)]);
      if (bc == RhoBC::Periodic)
        e += face(rho.values[g.cell_index(n - 1, j)],
                  rho.values[g.cell_index(0, j)]);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j + 1 < n; ++j)
        e += face(rho.values[g.cell_index(i, j)],
                  rho.values[g.cell_index(i, j + 1)]);
      if (bc == RhoBC::Periodic)
        e += face(rho.values[g.cell_index(i, n - 1)],
                  rho.values[g.cell_index(i, 0)]);
    }
  }
  return 0.5 * eps2 * e * hd;
}

EnergyModel make_quadratic_energy() {
  EnergyModel e;
  e.name = "quadratic_internal";
  e.grad = [](const DensityField& rho, const GridSpec& g, DensityField& out) {
    check_conforms(rho, g, "quadratic grad");
    out.values.resize(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i)
      out.values[i] = 2.0 * rho.values[i];
  };
  e.value = [](const DensityField& rho, const GridSpec& g) {
    double s = 0.0;
    for (double r : rho.values) s += r * r;
    return s * g.cell_volume();
  };
  return e;
}

EnergyModel make_entropy_potential_energy(
    std::function<double(std::array<double, 2>)> potential) {
  EnergyModel e;
  e.name = "entropy_potential";
  auto vat = [potential](const GridSpec& g, std::size_t idx) {
    if (g.dim == 1)
      return potential({g.cell_center(static_cast<int>(idx)), 0.0});
    int i = static_cast<int>(idx % g.n), j = static_cast<int>(idx / g.n);
    return potential(g.cell_center2(i, j));
  };
  e.grad = [vat](const DensityField& rho, const GridSpec& g,
                 DensityField& out) {
    check_conforms(rho, g, "entropy grad");
    out.values.resize(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
      if (rho.values[i] <= 0.0)
        throw DomainError("entropy gradient: log singularity at nonpositive "
                          "density", static_cast<long>(i));
      out.values[i] = std::log(rho.values[i]) + vat(g, i);
    }
  };
  e.value = [vat](const DensityField& rho, const GridSpec& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
      double r = rho.values[i];
      if (r < 0.0)
        throw DomainError("entropy value: negative density",
                          static_cast<long>(i));
      double rlogr = r > 0.0 ? r * std::log(r) : 0.0;
      s += rlogr - r + vat(g, i) * r;
    }
    return s * g.cell_volume();
  };
  EnergyModel::Split sp;
  sp.v_grad = [vat](const DensityField& rho, const GridSpec& g,
                    DensityField& out) {
    out.values.resize(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) out.values[i] = vat(g, i);
  };
  sp.u_grad = [](const DensityField& rho, const GridSpec& g,
                 DensityField& out) {
    check_conforms(rho, g, "entropy u_grad");
    out.values.resize(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
      if (rho.values[i] <= 0.0)
        throw DomainError("entropy gradient: log singularity at nonpositive "
                          "density", static_cast<long>(i));
      out.values[i] = std::log(rho.values[i]);
    }
  };
  sp.u_prox = std::make_shared<EntropyConjugateProx>();
  e.split = std::move(sp);
  return e;
}

EnergyModel make_dirichlet_energy(double eps2, RhoBC bc) {
  EnergyModel e;
  e.name = "dirichlet";
  e.grad = [eps2, bc](const DensityField& rho, const GridSpec& g,
                      DensityField& out) {
    laplacian(rho, g, bc, out);
    for (double& v : out.values) v = -eps2 * v;
  };
  e.value = [eps2, bc](const DensityField& rho, const GridSpec& g) {
    return dirichlet_face_energy(rho, g, bc, eps2);
  };
  return e;
}

namespace {

struct VdwPressure {
  int kind;
  double eps;
  double operator()(double r) const {
    double r3 = r * r * r;
    if (kind == 1) return 1.0 / r3 - eps / (r3 * r);
    double r9 = r3 * r3 * r3;
    double e6 = std::pow(eps, 6);
    return 1.0 / r3 - e6 / r9;
  }
  double deriv(double r) const {
    double r4 = r * r * r * r;
    if (kind == 1) return -3.0 / r4 + 4.0 * eps / (r4 * r);
    double r10 = std::pow(r, 10);
    double e6 = std::pow(eps, 6);
    return -3.0 / r4 + 9.0 * e6 / r10;
  }
  // antiderivative of P, for the diagnostic energy value
  double anti(double r) const {
    if (kind == 1)
      return -0.5 / (r * r) + eps / (3.0 * r * r * r);
    double e6 = std::pow(eps, 6);
    return -0.5 / (r * r) + e6 / (8.0 * std::pow(r, 8));
  }
};

}  // namespace

EnergyModel make_thin_film_vdw_energy(int kind, double eps) {
  VdwPressure P{kind, eps};
  EnergyModel e;
  e.name = kind == 1 ? "thin_film_vdw1" : "thin_film_vdw2";
  e.grad = [P](const DensityField& rho, const GridSpec& g, DensityField& out) {
    laplacian(rho, g, RhoBC::Neumann, out);
    for (std::size_t i = 0; i < rho.size(); ++i) {
      if (rho.values[i] <= 0.0)
        throw DomainError("thin-film pressure: nonpositive thickness",
                          static_cast<long>(i));
      out.values[i] = P(rho.values[i]) - out.values[i];
    }
  };
  e.value = [P](const DensityField& rho, const GridSpec& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
      if (rho.values[i] <= 0.0) return std::numeric_limits<double>::infinity();
      s += P.anti(rho.values[i]);
    }
    return s * g.cell_volume() +
           dirichlet_face_energy(rho, g, RhoBC::Neumann, 1.0);
  };
  EnergyModel::Split sp;
  sp.v_grad = [](const DensityField& rho, const GridSpec& g,
                 DensityField& out) {
    laplacian(rho, g, RhoBC::Neumann, out);
    for (double& v : out.values) v = -v;
  };
  sp.u_grad = [P](const DensityField& rho, const GridSpec& g,
                  DensityField& out) {
    check_conforms(rho, g, "vdw u_grad");
    out.values.resize(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
      if (rho.values[i] <= 0.0)
        throw DomainError("thin-film pressure: nonpositive thickness",
                          static_cast<long>(i));
      out.values[i] = P(rho.values[i]);
    }
  };
  sp.u_prox = std::make_shared<PointwiseNewtonProx>(
      [P](double r) { return P(r); }, [P](double r) { return P.deriv(r); },
      0.0, std::numeric_limits<double>::infinity());
  e.split = std::move(sp);
  return e;
}

EnergyModel make_double_well_dirichlet_energy(double eps2, RhoBC bc) {
  EnergyModel e;
  e.name = "double_well_dirichlet";
  e.grad = [eps2, bc](const DensityField& rho, const GridSpec& g,
                      DensityField& out) {
    laplacian(rho, g, bc, out);
    for (std::size_t i = 0; i < rho.size(); ++i) {
      double r = rho.values[i];
      out.values[i] = r * (r * r - 1.0) - eps2 * out.values[i];
    }
  };
  e.value = [eps2, bc](const DensityField& rho, const GridSpec& g) {
    double s = 0.0;
    for (double r : rho.values) {
      double q = r * r - 1.0;
      s += 0.25 * q * q;
    }
    return s * g.cell_volume() + dirichlet_face_energy(rho, g, bc, eps2);
  };
  return e;
}

namespace {

constexpr double kAnisoReg = 1e-8;  // delta_p in p = grad/sqrt(|grad|^2+dp^2)

struct AnisoSpec {
  AnisotropyKind kind;
  double alpha;
  double omega;
};

double gamma_of(const AnisoSpec& a, double p1, double p2) {
  switch (a.kind) {
    case AnisotropyKind::FourFold: {
      double q1 = p1 * p1, q2 = p2 * p2;
      return 1.0 + a.alpha * (4.0 * q1 * q1 + 4.0 * q2 * q2 - 3.0);
    }
    case AnisotropyKind::EightFold: {
      auto f = [](double p) {
        double p2_ = p * p, p4 = p2_ * p2_, p6 = p4 * p2_, p8 = p4 * p4;
        return 8.0 * p8 - 10.0 * p6 + p4;
      };
      return 1.0 + a.alpha * (8.0 * f(p1) + 8.0 * f(p2) + 9.0);
    }
    case AnisotropyKind::Omega: {
      double theta = std::atan2(p1, p2);
      return 1.0 + a.alpha * std::cos(a.omega * theta);
    }
  }
  return 1.0;
}

void gamma_grad(const AnisoSpec& a, double p1, double p2, double& d1,
                double& d2) {
  switch (a.kind) {
    case AnisotropyKind::FourFold:
      d1 = a.alpha * 16.0 * p1 * p1 * p1;
      d2 = a.alpha * 16.0 * p2 * p2 * p2;
      return;
    case AnisotropyKind::EightFold: {
      auto fp = [](double p) {
        double p2_ = p * p, p3 = p2_ * p, p5 = p3 * p2_, p7 = p5 * p2_;
        return 64.0 * p7 - 60.0 * p5 + 4.0 * p3;
      };
      d1 = 8.0 * a.alpha * fp(p1);
      d2 = 8.0 * a.alpha * fp(p2);
      return;
    }
    case AnisotropyKind::Omega: {
      double r2 = p1 * p1 + p2 * p2;
      if (r2 < 1e-30) {
        d1 = d2 = 0.0;
        return;
      }
      double theta = std::atan2(p1, p2);
      double dgdt = -a.alpha * a.omega * std::sin(a.omega * theta);
      d1 = dgdt * (p2 / r2);
      d2 = dgdt * (-p1 / r2);
      return;
    }
  }
}

// flux w = d/dg [ gamma(p(g))^2 |g|^2 ] with p = g / sqrt(|g|^2 + dp^2)
void aniso_flux(const AnisoSpec& a, double g1, double g2, double& w1,
                double& w2) {
  double n2 = g1 * g1 + g2 * g2;
  double s = std::sqrt(n2 + kAnisoReg * kAnisoReg);
  double p1 = g1 / s, p2 = g2 / s;
  double gam = gamma_of(a, p1, p2);
  double dg1 = 0.0, dg2 = 0.0;
  gamma_grad(a, p1, p2, dg1, dg2);
  // dp/dg = I/s - g g^T / s^3
  double gdot = g1 * dg1 + g2 * dg2;
  double c1 = dg1 / s - g1 * gdot / (s * s * s);
  double c2 = dg2 / s - g2 * gdot / (s * s * s);
  w1 = 2.0 * gam * c1 * n2 + 2.0 * gam * gam * g1;
  w2 = 2.0 * gam * c2 * n2 + 2.0 * gam * gam * g2;
}

}  // namespace

double anisotropy_gamma(AnisotropyKind kind, double alpha, double omega,
                        double p1, double p2) {
  return gamma_of(AnisoSpec{kind, alpha, omega}, p1, p2);
}

EnergyModel make_anisotropic_energy(AnisotropyKind kind, double alpha,
                                    double omega, double eps, double beta) {
  AnisoSpec a{kind, alpha, omega};
  const double eps2 = eps * eps;
  EnergyModel e;
  e.name = "anisotropic_double_well";

  auto v_grad = [a, eps2](const DensityField& rho, const GridSpec& g,
                          DensityField& out) {
    CellVectorField grad, flux;
    wide_gradient_periodic(rho, g, grad);
    flux.dim = 2;
    flux.comp[0].resize(g.num_cells());
    flux.comp[1].resize(g.num_cells());
    for (std::size_t i = 0; i < g.num_cells(); ++i)
      aniso_flux(a, grad.comp[0][i], grad.comp[1][i], flux.comp[0][i],
                 flux.comp[1][i]);
    wide_divergence_periodic(flux, g, out);
    for (std::size_t i = 0; i < g.num_cells(); ++i) {
      double r = rho.values[i];
      out.values[i] = r * (r * r - 1.0) - 0.5 * eps2 * out.values[i];
    }
  };
  auto u_grad = [beta, eps2](const DensityField& rho, const GridSpec& g,
                             DensityField& out) {
    DensityField lap;
    laplacian(rho, g, RhoBC::Periodic, lap);
    laplacian(lap, g, RhoBC::Periodic, out);
    for (double& v : out.values) v *= beta * eps2;
  };

  e.grad = [v_grad, u_grad](const DensityField& rho, const GridSpec& g,
                            DensityField& out) {
    DensityField u;
    v_grad(rho, g, out);
    u_grad(rho, g, u);
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] += u.values[i];
  };
  e.value = [a, eps2, beta](const DensityField& rho, const GridSpec& g) {
    CellVectorField grad;
    wide_gradient_periodic(rho, g, grad);
    DensityField lap;
    laplacian(rho, g, RhoBC::Periodic, lap);
    double s = 0.0;
    for (std::size_t i = 0; i < g.num_cells(); ++i) {
      double r = rho.values[i];
      double q = r * r - 1.0;
      double g1 = grad.comp[0][i], g2 = grad.comp[1][i];
      double n2 = g1 * g1 + g2 * g2;
      double sreg = std::sqrt(n2 + kAnisoReg * kAnisoReg);
      double gam = gamma_of(a, g1 / sreg, g2 / sreg);
      s += 0.25 * q * q + 0.5 * eps2 * gam * gam * n2 +
           0.5 * beta * eps2 * lap.values[i] * lap.values[i];
    }
    return s * g.cell_volume();
  };
  EnergyModel::Split sp;
  sp.v_grad = v_grad;
  sp.u_grad = u_grad;
  sp.u_prox = std::make_shared<SpectralQuadraticProx>(
      [beta, eps2](double lam) { return beta * eps2 * lam * lam; },
      SpectralBC::Periodic);
  e.split = std::move(sp);
  return e;
}

EnergyModel make_doubly_degenerate_potential(double eps2, RhoBC bc) {
  EnergyModel e;
  e.name = "doubly_degenerate_potential";
  e.grad = [eps2, bc](const DensityField& rho, const GridSpec& g,
                      DensityField& out) {
    laplacian(rho, g, bc, out);
    for (std::size_t i = 0; i < rho.size(); ++i) {
      double r = rho.values[i];
      double q = 1.0 - r * r;
      if (q <= 0.0)
        throw DomainError(
            "doubly degenerate potential: density at or beyond +-1",
            static_cast<long>(i));
      out.values[i] = (r * (r * r - 1.0) - eps2 * out.values[i]) / (q * q);
    }
  };
  EnergyModel::Split sp;
  sp.v_grad = [](const DensityField& rho, const GridSpec&, DensityField& out) {
    out.values.assign(rho.size(), 0.0);
  };
  sp.u_grad = e.grad;
  sp.u_prox = std::make_shared<CoupledNewtonProx>(eps2, true, 3);
  e.split = std::move(sp);
  return e;
}

}  // namespace wgf
