#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wgf/energy.hpp"
#include "wgf/errors.hpp"
#include "wgf/mobility.hpp"
#include "wgf/problem.hpp"
#include "wgf/prox.hpp"

using namespace wgf;
using namespace wgf::test;

namespace {

GridSpec grid1(int n, double h, double x0 = 0.0) {
  return GridSpec{1, n, h, {x0, 0}};
}

// central finite differences of the energy value against the analytic
// gradient of the rescaled energy (grad * h^d vs dE_h)
void check_gradient_consistency(const EnergyModel& e, const GridSpec& g,
                                const DensityField& rho, Rng& rng) {
  REQUIRE(e.has_value());
  const double eps = 1e-6;
  DensityField grad;
  e.grad(rho, g, grad);
  double base = std::abs(e.value(rho, g));
  for (int rep = 0; rep < 3; ++rep) {
    DensityField delta = rng.density(g, -1.0, 1.0);
    double nrm = std::sqrt(norm2_squared(delta.values));
    for (double& v : delta.values) v /= nrm;
    DensityField plus = rho, minus = rho;
    for (std::size_t i = 0; i < rho.size(); ++i) {
      plus.values[i] += eps * delta[i];
      minus.values[i] -= eps * delta[i];
    }
    double fd = (e.value(plus, g) - e.value(minus, g)) / (2.0 * eps);
    double an = dot(grad.values, delta.values) * g.cell_volume();
    CHECK(std::abs(an - fd) <= 1e-5 * (1.0 + base));
  }
}

void check_split_consistency(const EnergyModel& e, const GridSpec& g,
                             const DensityField& rho) {
  REQUIRE(e.has_split());
  DensityField full, u, v;
  e.grad(rho, g, full);
  e.split->u_grad(rho, g, u);
  e.split->v_grad(rho, g, v);
  for (std::size_t i = 0; i < rho.size(); ++i)
    CHECK(std::abs(u[i] + v[i] - full[i]) <=
          1e-12 * (1.0 + std::abs(full[i])));
}

}  // namespace

TEST_CASE("midpoint mobility: linear, saturation vertex, cubic semi") {
  GridSpec g = grid1(1, 1.0);
  DensityField one = make_density(g, 1.0);
  MobilityModel lin = make_mobility("linear", 0.0, 10.0);
  auto [v1, d1] = mobility_midpoint(one, one, lin);
  CHECK(v1[0] == doctest::Approx(1.0));
  CHECK(d1[0] == doctest::Approx(0.5));

  MobilityModel sat = make_mobility("saturation", 0.0, 1.0);
  DensityField half = make_density(g, 0.5);
  auto [v2, d2] = mobility_midpoint(half, half, sat);
  CHECK(v2[0] == doctest::Approx(0.25));
  CHECK(d2[0] == doctest::Approx(0.0));

  MobilityModel cub = make_mobility("cubic", 0.0, 1e6);
  cub.mode = MobilityMode::SemiImplicit;
  DensityField prev = make_density(g, 0.5);
  auto [v3, d3] = mobility_midpoint(one, prev, cub);
  CHECK(v3[0] == doctest::Approx(0.25));
  CHECK(d3[0] == doctest::Approx(0.25));
}

TEST_CASE("semi-implicit effective mobility is affine in the unknown") {
  GridSpec g = grid1(12, 0.1);
  Rng rng(5);
  MobilityModel sat = make_mobility("saturation", 0.0, 1.0);
  sat.mode = MobilityMode::SemiImplicit;
  DensityField prev = rng.density(g, 0.05, 0.95);
  DensityField r1 = rng.density(g, 0.05, 0.95);
  DensityField r2 = rng.density(g, 0.05, 0.95);
  const double a = 0.3;
  DensityField mix = make_density(g);
  for (std::size_t i = 0; i < g.num_cells(); ++i)
    mix.values[i] = a * r1[i] + (1 - a) * r2[i];
  auto [vm, dm] = mobility_midpoint(mix, prev, sat);
  auto [va, da] = mobility_midpoint(r1, prev, sat);
  auto [vb, db] = mobility_midpoint(r2, prev, sat);
  for (std::size_t i = 0; i < g.num_cells(); ++i) {
    CHECK(vm[i] == doctest::Approx(a * va[i] + (1 - a) * vb[i]).epsilon(1e-14));
    CHECK(dm[i] == doctest::Approx(da[i]).epsilon(1e-14));
  }
}

TEST_CASE("quadratic internal energy: gradient and exact values") {
  GridSpec g = grid1(4, 0.5, -1.0);  // domain [-1, 1]
  EnergyModel e = make_quadratic_energy();
  DensityField c = make_density(g, 0.8);
  DensityField grad;
  e.grad(c, g, grad);
  for (double v : grad.values) CHECK(v == doctest::Approx(1.6));
  // constant c on a domain of length 2: E_h = 2 c^2
  CHECK(e.value(c, g) == doctest::Approx(2.0 * 0.64));
  Rng rng(1);
  DensityField rho = rng.density(g, 0.1, 2.0);
  check_gradient_consistency(e, g, rho, rng);
}

TEST_CASE("double-well energy: paper gradient form and well minimum") {
  GridSpec g{2, 8, 0.125, {0, 0}};
  const double eps2 = 0.01;
  EnergyModel e = make_double_well_dirichlet_energy(eps2, RhoBC::Neumann);
  DensityField one = make_density(g, 1.0);
  CHECK(e.value(one, g) == doctest::Approx(0.0));
  DensityField grad;
  e.grad(one, g, grad);
  for (double v : grad.values) CHECK(v == doctest::Approx(0.0));

  Rng rng(2);
  DensityField rho = rng.density(g, -0.9, 0.9);
  DensityField lap;
  laplacian(rho, g, RhoBC::Neumann, lap);
  e.grad(rho, g, grad);
  for (std::size_t i = 0; i < g.num_cells(); ++i) {
    double expect =
        rho[i] * (rho[i] * rho[i] - 1.0) - eps2 * lap.values[i];
    CHECK(grad.values[i] == doctest::Approx(expect).epsilon(1e-14));
  }
  check_gradient_consistency(e, g, rho, rng);
}

TEST_CASE("constant density has zero Dirichlet gradient") {
  GridSpec g = grid1(16, 0.125);
  EnergyModel e = make_dirichlet_energy(1.0, RhoBC::Neumann);
  DensityField c = make_density(g, 1.3);
  DensityField grad;
  e.grad(c, g, grad);
  for (double v : grad.values) CHECK(v == doctest::Approx(0.0));
  Rng rng(3);
  DensityField rho = rng.density(g, 0.0, 2.0);
  check_gradient_consistency(e, g, rho, rng);
}

TEST_CASE("entropy + potential energy: gradient, value, split, domain error") {
  GridSpec g = grid1(10, 0.2, -1.0);
  EnergyModel e = make_entropy_potential_energy(
      [](std::array<double, 2> x) { return 0.5 * x[0] * x[0]; });
  Rng rng(4);
  DensityField rho = rng.density(g, 0.2, 0.9);
  check_gradient_consistency(e, g, rho, rng);
  check_split_consistency(e, g, rho);

  DensityField bad = rho;
  bad.values[3] = 0.0;
  DensityField grad;
  CHECK_THROWS_AS(e.grad(bad, g, grad), DomainError);
  try {
    e.grad(bad, g, grad);
  } catch (const DomainError& err) {
    CHECK(err.index == 3);
  }
}

TEST_CASE("thin-film intermolecular energies: gradient and split") {
  GridSpec g = grid1(12, 1.0 / 12);
  for (int kind : {1, 2}) {
    EnergyModel e = make_thin_film_vdw_energy(kind, 0.1);
    Rng rng(40 + kind);
    DensityField rho = rng.density(g, 0.3, 1.5);
    check_gradient_consistency(e, g, rho, rng);
    check_split_consistency(e, g, rho);
  }
}

TEST_CASE("anisotropic energy: FD oracle validates the analytic gradient") {
  GridSpec g{2, 10, 0.1, {-0.5, -0.5}};
  for (auto kind : {AnisotropyKind::FourFold, AnisotropyKind::EightFold,
                    AnisotropyKind::Omega}) {
    double alpha = kind == AnisotropyKind::Omega ? 0.4 : 0.2;
    EnergyModel e = make_anisotropic_energy(kind, alpha, 6.0, 0.1, 1e-4);
    Rng rng(17);
    DensityField rho = rng.density(g, -0.8, 0.8);
    check_gradient_consistency(e, g, rho, rng);
    check_split_consistency(e, g, rho);
  }
}

TEST_CASE("doubly degenerate potential: value absent, quotient gradient") {
  GridSpec g{2, 6, 1.0 / 6, {0, 0}};
  const double eps2 = 4e-4;
  EnergyModel e = make_doubly_degenerate_potential(eps2, RhoBC::Neumann);
  CHECK_FALSE(e.has_value());
  REQUIRE(e.has_split());
  Rng rng(6);
  DensityField rho = rng.density(g, -0.7, 0.7);
  DensityField grad, lap;
  e.grad(rho, g, grad);
  laplacian(rho, g, RhoBC::Neumann, lap);
  for (std::size_t i = 0; i < g.num_cells(); ++i) {
    double r = rho[i];
    double q = 1.0 - r * r;
    double expect = (r * (r * r - 1.0) - eps2 * lap.values[i]) / (q * q);
    CHECK(grad.values[i] == doctest::Approx(expect).epsilon(1e-13));
  }
  check_split_consistency(e, g, rho);

  DensityField bad = rho;
  bad.values[5] = 1.0;
  CHECK_THROWS_AS(e.grad(bad, g, grad), DomainError);
}

TEST_CASE("energy value unavailable reports an error through the wrapper") {
  GridSpec g{2, 4, 0.25, {0, 0}};
  GradientFlowProblem p;
  p.grid = g;
  p.box = {-1.0, 1.0};
  p.mobility = make_mobility("doubly_degenerate", -1.0, 1.0);
  p.energy = make_doubly_degenerate_potential(4e-4, RhoBC::Neumann);
  CHECK_FALSE(p.energy.has_value());
  DensityField rho = make_density(g, 0.2);
  CHECK_THROWS_AS(energy_value(rho, p), DomainError);
  DensityField grad = energy_grad(rho, p);
  CHECK(grad.size() == g.num_cells());
}

TEST_CASE("periodic Laplacian wraps, Neumann mirrors") {
  GridSpec g = grid1(4, 1.0);
  DensityField rho = make_density(g);
  rho.values = {1.0, 0.0, 0.0, 0.0};
  DensityField lap;
  laplacian(rho, g, RhoBC::Periodic, lap);
  CHECK(lap.values[0] == doctest::Approx(-2.0));
  CHECK(lap.values[3] == doctest::Approx(1.0));
  laplacian(rho, g, RhoBC::Neumann, lap);
  CHECK(lap.values[0] == doctest::Approx(-1.0));
  CHECK(lap.values[3] == doctest::Approx(0.0));
}
