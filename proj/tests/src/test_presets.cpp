#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wgf/presets.hpp"

using namespace wgf;

TEST_CASE("self-similar profile: pointwise values and positive-part clamp") {
  CHECK(barenblatt(5.0, 0.0) == 0.0);
  CHECK(barenblatt(-3.0, 0.05) == 0.0);
  double peak = std::pow(1e-3, -1.0 / 3.0) * std::cbrt(3.0 / 16.0);
  CHECK(barenblatt(0.0, 0.0) == doctest::Approx(peak).epsilon(1e-14));
  CHECK(barenblatt(0.1, 0.01) > 0.0);
}

TEST_CASE("self-similar profile conserves mass under fine quadrature") {
  // Simpson's rule over [-1, 1] at three times
  auto mass_at = [](double t) {
    const int N = 200000;
    const double a = -1.0, b = 1.0, h = (b - a) / N;
    double s = barenblatt(a, t) + barenblatt(b, t);
    for (int k = 1; k < N; ++k)
      s += barenblatt(a + k * h, t) * (k % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
  };
  double m0 = mass_at(0.0);
  CHECK(std::abs(mass_at(0.01) - m0) <= 1e-6 * m0);
  CHECK(std::abs(mass_at(0.05) - m0) <= 1e-6 * m0);
}

TEST_CASE("all preset names load and expose documented parameters") {
  for (const auto& name : preset_names()) {
    Preset ps = load_preset(name);
    CHECK(ps.name == name);
    CHECK(ps.default_n >= 1);
    CHECK(ps.loop.dt > 0.0);
    CHECK(ps.solver.tau > 0.0);
    CHECK(ps.solver.sigma > 0.0);
    GridSpec g = ps.make_grid();
    GradientFlowProblem p = ps.make_problem(g);
    DensityField rho0 = ps.initial(g, ps.default_seed);
    REQUIRE(rho0.size() == g.num_cells());
    // initial data within the box, mass strictly inside the feasible range
    double mass = 0.0;
    for (double v : rho0.values) {
      CHECK(v >= p.box.lo - 1e-15);
      CHECK(v <= p.box.hi + 1e-15);
      mass += v;
    }
    double n = static_cast<double>(g.num_cells());
    CHECK(mass > p.box.lo * n + 1e-9);
    CHECK(mass < p.box.hi * n - 1e-9);
  }
  CHECK_THROWS_AS(load_preset("no_such_model"), DomainError);
}

TEST_CASE("documented parameter anchors") {
  Preset e1 = load_preset("porous_media");
  CHECK(e1.solver.tau * e1.solver.sigma == 1.0);
  CHECK(e1.box.lo == 0.0);
  CHECK(e1.make_grid().h == doctest::Approx(0.01));
  CHECK(e1.loop.dt == 0.0005);
  CHECK(e1.solver.tolerance == 1e-5);

  Preset e2 = load_preset("fokker_planck_saturated");
  CHECK(e2.make_grid().h == doctest::Approx(0.02));
  CHECK(e2.loop.dt == 0.1);
  CHECK(e2.solver.tau == 0.2);
  CHECK(e2.solver.sigma == doctest::Approx(5.0));
  CHECK(e2.solver.tolerance == 1e-7);
  CHECK(e2.box.lo == 0.0);
  CHECK(e2.box.hi == 1.0);
  CHECK(e2.semi_implicit_available);
  CHECK(e2.semi_dt == 0.01);
  GridSpec g2 = e2.make_grid();
  DensityField r2 = e2.initial(g2, 0);
  for (double v : r2.values) CHECK(v == 0.415);

  Preset e3 = load_preset("thin_film");
  CHECK(e3.make_grid().h == doctest::Approx(0.01));
  CHECK(e3.solver.tau == 0.03);
  CHECK(e3.semi_implicit_available);

  Preset e4 = load_preset("cahn_hilliard");
  CHECK(e4.make_grid().h == doctest::Approx(1.0 / 64));
  CHECK(e4.solver.tau == 20.0);
  CHECK(e4.solver.sigma == doctest::Approx(1.0 / 20.0));
  CHECK(e4.box.lo == -1.0);
  CHECK(e4.box.hi == 1.0);

  Preset e5 = load_preset("cahn_hilliard_aniso_fourfold");
  CHECK(e5.make_grid().n == 128);
  CHECK(e5.solver.tau == 2.0);
  CHECK(e5.rho_bc == RhoBC::Periodic);

  Preset e6 = load_preset("doubly_degenerate");
  CHECK(e6.make_grid().n == 64);
  CHECK(e6.loop.dt == 0.1);
  CHECK(e6.solver.tau == 0.2);
  CHECK(static_cast<bool>(e6.diagnostic_energy));
}

TEST_CASE("random initial data is reproducible and strictly inside (-1,1)") {
  Preset ps = load_preset("cahn_hilliard");
  GridSpec g = ps.make_grid();
  DensityField a = ps.initial(g, 777);
  DensityField b = ps.initial(g, 777);
  DensityField c = ps.initial(g, 778);
  bool all_equal = true, any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    all_equal = all_equal && a[i] == b[i];
    any_diff = any_diff || a[i] != c[i];
    CHECK(std::abs(a[i]) <= 0.05);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("doubly degenerate initial state has two separated inclusions") {
  Preset ps = load_preset("doubly_degenerate");
  GridSpec g = ps.make_grid();
  DensityField rho = ps.initial(g, 0);
  // count positive-phase components by flood fill over rho > 0
  std::vector<int> label(g.num_cells(), 0);
  int comps = 0;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      std::size_t idx = g.cell_index(i, j);
      if (rho[idx] <= 0.0 || label[idx]) continue;
      ++comps;
      std::vector<std::size_t> stack{idx};
      label[idx] = comps;
      while (!stack.empty()) {
        std::size_t cur = stack.back();
        stack.pop_back();
        int ci = static_cast<int>(cur % g.n), cj = static_cast<int>(cur / g.n);
        for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
          int ni = ci + di, nj = cj + dj;
          if (ni < 0 || nj < 0 || ni >= g.n || nj >= g.n) continue;
          std::size_t nidx = g.cell_index(ni, nj);
          if (rho[nidx] > 0.0 && !label[nidx]) {
            label[nidx] = comps;
            stack.push_back(nidx);
          }
        }
      }
    }
  CHECK(comps == 2);
}
