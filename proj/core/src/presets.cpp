#include "wgf/presets.hpp"

#include <cmath>

#include "wgf/errors.hpp"

namespace wgf {

namespace {

// splitmix64; the uniform_real_distribution of the standard library is
// implementation-defined, this keeps the random initial data reproducible
// across toolchains.
struct SplitMix64 {
  std::uint64_t state;
  double next_unit() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
};

DensityField fill_from(const GridSpec& g,
                       const std::function<double(double, double)>& f) {
  DensityField rho = make_density(g);
  if (g.dim == 1) {
    for (int i = 0; i < g.n; ++i) rho.values[i] = f(g.cell_center(i), 0.0);
  } else {
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i) {
        auto c = g.cell_center2(i, j);
        rho.values[g.cell_index(i, j)] = f(c[0], c[1]);
      }
  }
  return rho;
}

constexpr double kWideBoxHi = 1e6;  // stands in for an inactive upper bound

}  // namespace

double barenblatt(double x, double t) {
  const double t0 = 1e-3;
  double s = t + t0;
  double a = std::cbrt(3.0 / 16.0);
  double core = a - std::pow(s, -2.0 / 3.0) * x * x / 12.0;
  return std::pow(s, -1.0 / 3.0) * std::max(0.0, core);
}

GridSpec Preset::make_grid() const { return make_grid_n(default_n); }

GridSpec Preset::make_grid_n(int n) const {
  if (n < 1) throw DomainError("preset grid: n must be positive");
  GridSpec g;
  g.dim = dim;
  g.n = n;
  g.h = domain_length / n;
  g.origin = origin;
  return g;
}

GridSpec Preset::make_grid_h(double h) const {
  if (h <= 0.0) throw DomainError("preset grid: h must be positive");
  int n = static_cast<int>(std::llround(domain_length / h));
  return make_grid_n(n);
}

GradientFlowProblem Preset::make_problem(const GridSpec& g, MobilityMode mode,
                                         BoxBounds box_override) const {
  GradientFlowProblem p;
  p.grid = g;
  p.box = box_override;
  p.rho_bc = rho_bc;
  p.mobility = make_mobility(mobility_family, box_override.lo,
                             box_override.hi);
  if (mode == MobilityMode::SemiImplicit && !p.mobility.semi_implicit_available())
    throw DomainError("preset '" + name +
                      "': semi-implicit mobility not available");
  p.mobility.mode = mode;
  p.energy = make_energy();
  p.diagnostic_energy = diagnostic_energy;
  return p;
}

GradientFlowProblem Preset::make_problem(const GridSpec& g) const {
  return make_problem(g, MobilityMode::Implicit, box);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "porous_media",
      "fokker_planck_saturated",
      "thin_film",
      "thin_film_vdw1",
      "thin_film_vdw2",
      "cahn_hilliard",
      "cahn_hilliard_aniso_fourfold",
      "cahn_hilliard_aniso_eightfold",
      "cahn_hilliard_aniso_omega",
      "doubly_degenerate",
  };
  return names;
}

Preset load_preset(const std::string& name) {
  Preset ps;
  ps.name = name;

  if (name == "porous_media") {
    ps.dim = 1;
    ps.origin = {-1.0, 0.0};
    ps.domain_length = 2.0;
    ps.default_n = 200;  // h = 0.01
    ps.box = {0.0, kWideBoxHi};
    ps.rho_bc = RhoBC::None;
    ps.mobility_family = "linear";
    ps.loop = {0.0005, 0.05, 10};
    ps.solver.tau = 1.0;
    ps.solver.sigma = 1.0;
    ps.solver.tolerance = 1e-5;
    ps.solver.iter_max = 30000;
    ps.make_energy = [] { return make_quadratic_energy(); };
    ps.initial = [](const GridSpec& g, std::uint64_t) {
      return fill_from(g, [](double x, double) { return barenblatt(x, 0.0); });
    };
    ps.reference = [](double x, double, double t) { return barenblatt(x, t); };
    return ps;
  }

  if (name == "fokker_planck_saturated") {
    ps.dim = 1;
    ps.origin = {-4.0, 0.0};
    ps.domain_length = 8.0;
    ps.default_n = 400;  // h = 0.02
    ps.box = {0.0, 1.0};
    ps.rho_bc = RhoBC::None;
    ps.mobility_family = "saturation";
    ps.loop = {0.1, 10.0, 10};
    ps.solver.tau = 0.2;
    ps.solver.sigma = 1.0 / 0.2;
    ps.solver.tolerance = 1e-7;
    ps.solver.iter_max = 30000;
    ps.semi_implicit_available = true;
    ps.semi_dt = 0.01;
    ps.make_energy = [] {
      return make_entropy_potential_energy([](std::array<double, 2> x) {
        return 0.5 * x[0] * x[0];
      });
    };
    ps.initial = [](const GridSpec& g, std::uint64_t) {
      return fill_from(g, [](double, double) { return 0.415; });
    };
    return ps;
  }

  if (name == "thin_film") {
    ps.dim = 1;
    ps.origin = {-1.0, 0.0};
    ps.domain_length = 2.0;
    ps.default_n = 200;  // h = 0.01
    ps.box = {0.0, kWideBoxHi};
    ps.rho_bc = RhoBC::Neumann;
    ps.mobility_family = "cubic";
    ps.loop = {0.001, 0.5, 25};
    ps.solver.tau = 0.03;
    ps.solver.sigma = 1.0 / 0.03;
    ps.solver.tolerance = 1e-7;
    ps.solver.iter_max = 30000;
    ps.semi_implicit_available = true;
    // sigma chosen so tau*sigma respects the product bound at the
    // documented initial data (max rho0 = 2.05, slope = rho^2)
    ps.semi_sigma = 1.0;
    ps.make_energy = [] { return make_dirichlet_energy(1.0, RhoBC::Neumann); };
    ps.initial = [](const GridSpec& g, std::uint64_t) {
      return fill_from(g, [](double x, double) {
        return 0.8 - std::cos(M_PI * x) + 0.25 * std::cos(2.0 * M_PI * x);
      });
    };
    return ps;
  }

  if (name == "thin_film_vdw1" || name == "thin_film_vdw2") {
    const int kind = name == "thin_film_vdw1" ? 1 : 2;
    const double eps = 0.1;
    ps.dim = 1;
    ps.origin = {0.0, 0.0};
    ps.domain_length = 1.0;
    ps.default_n = 200;  // h = 0.005
    ps.box = {0.0, kWideBoxHi};
    ps.rho_bc = RhoBC::Neumann;
    ps.mobility_family = "cubic";
    ps.loop = {0.001, 1.0, 50};
    ps.solver.tau = 0.01;
    ps.solver.sigma = 1.0 / 0.01;
    ps.solver.tolerance = 1e-7;
    ps.solver.iter_max = 30000;
    ps.make_energy = [kind, eps] {
      return make_thin_film_vdw_energy(kind, eps);
    };
    ps.initial = [eps](const GridSpec& g, std::uint64_t) {
      return fill_from(g, [eps](double x, double) {
        return (1.0 - eps) * 0.5 * M_PI * std::cos(0.5 * M_PI * x) + eps;
      });
    };
    return ps;
  }

  if (name == "cahn_hilliard") {
    const double eps = 0.02;
    ps.dim = 2;
    ps.origin = {0.0, 0.0};
    ps.domain_length = 1.0;
    ps.default_n = 64;
    ps.box = {-1.0, 1.0};
    ps.rho_bc = RhoBC::Neumann;
    ps.mobility_family = "degenerate_quad";
    ps.loop = {0.001, 0.5, 25};
    ps.solver.tau = 20.0;
    ps.solver.sigma = 1.0 / 20.0;
    ps.solver.tolerance = 1e-7;
    ps.solver.iter_max = 30000;
    ps.default_seed = 12345;
    ps.make_energy = [eps] {
      return make_double_well_dirichlet_energy(eps * eps, RhoBC::Neumann);
    };
    ps.initial = [](const GridSpec& g, std::uint64_t seed) {
      SplitMix64 rng{seed};
      DensityField rho = make_density(g);
      for (double& v : rho.values) v = -0.05 + 0.1 * rng.next_unit();
      return rho;
    };
    return ps;
  }

  if (name == "cahn_hilliard_aniso_fourfold" ||
      name == "cahn_hilliard_aniso_eightfold" ||
      name == "cahn_hilliard_aniso_omega") {
    AnisotropyKind kind = AnisotropyKind::FourFold;
    double alpha = 0.2, omega = 0.0;
    if (name == "cahn_hilliard_aniso_eightfold") kind = AnisotropyKind::EightFold;
    if (name == "cahn_hilliard_aniso_omega") {
      kind = AnisotropyKind::Omega;
      alpha = 0.4;
      omega = 6.0;
    }
    const double eps = 0.01, beta = 1e-4, eps0 = 0.025;
    ps.dim = 2;
    ps.origin = {-0.5, -0.5};
    ps.domain_length = 1.0;
    ps.default_n = 128;
    ps.box = {-1.0, 1.0};
    ps.rho_bc = RhoBC::Periodic;
    ps.mobility_family = "degenerate_quad";
    ps.loop = {0.001, 1.0, 50};
    ps.solver.tau = 2.0;
    ps.solver.sigma = 0.5;
    ps.solver.tolerance = 1e-5;
    ps.solver.iter_max = 30000;
    ps.make_energy = [kind, alpha, omega, eps, beta] {
      return make_anisotropic_energy(kind, alpha, omega, eps, beta);
    };
    ps.initial = [eps0](const GridSpec& g, std::uint64_t) {
      return fill_from(g, [eps0](double x, double y) {
        double r = std::sqrt(x * x + y * y);
        return -std::tanh((r - 0.3) / eps0);
      });
    };
    return ps;
  }

  if (name == "doubly_degenerate") {
    const double eps = 0.02;
    ps.dim = 2;
    ps.origin = {-0.5, -0.5};
    ps.domain_length = 1.0;
    ps.default_n = 64;
    ps.box = {-1.0, 1.0};
    ps.rho_bc = RhoBC::Neumann;
    ps.mobility_family = "doubly_degenerate";
    ps.loop = {0.1, 5.0, 5};
    ps.solver.tau = 0.2;
    ps.solver.sigma = 1.0 / 0.2;
    ps.solver.tolerance = 1e-5;
    // The first step relaxes the clipped initial profile and needs ~1.5k
    // inner iterations; converged states warm-start the following steps
    // down to tens of iterations.
    ps.solver.iter_max = 2500;
    ps.make_energy = [eps] {
      return make_doubly_degenerate_potential(eps * eps, RhoBC::Neumann);
    };
    // Interface (Ginzburg-Landau) functional tracked for diagnostics; the
    // model itself exposes only a potential field, not an energy value.
    ps.diagnostic_energy = [eps](const DensityField& rho, const GridSpec& g) {
      double s = 0.0;
      for (double r : rho.values) {
        double q = r * r - 1.0;
        s += 0.25 * q * q;
      }
      return s * g.cell_volume() +
             dirichlet_face_energy(rho, g, RhoBC::Neumann, eps * eps);
    };
    // Two separated phase inclusions, radii 0.2 and 0.1, with the
    // equilibrium profile width sqrt(2) eps of the well: for that width the
    // quotient's numerator rho(rho^2-1) - eps^2 Lap rho cancels to O(h^2)
    // through the interface, keeping the discrete potential moderate. The
    // profile saturates to exactly +-1 past |rho| = 1 - 5e-3; saturated
    // cells are box-pinned with vanishing mobility (frozen), while cells
    // hovering near the poles would see the quotient error grow like
    // h^2 / (eps^2 (1 - rho^2)) and shed spurious flips.
    ps.initial = [eps](const GridSpec& g, std::uint64_t) {
      const double w = std::sqrt(2.0) * eps;
      return fill_from(g, [w](double x, double y) {
        double d1 = 0.2 - std::hypot(x + 0.15, y);
        double d2 = 0.1 - std::hypot(x - 0.22, y);
        double v = std::max(std::tanh(d1 / w), std::tanh(d2 / w));
        if (v >= 1.0 - 5e-3) return 1.0;
        if (v <= -1.0 + 5e-3) return -1.0;
        return v;
      });
    };
    return ps;
  }

  throw DomainError("load_preset: unknown preset '" + name + "'");
}

}  // namespace wgf
