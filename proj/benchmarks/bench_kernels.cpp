#include <benchmark/benchmark.h>

#include <random>

#include "wgf/pdfb.hpp"
#include "wgf/presets.hpp"

using namespace wgf;

namespace {

DensityField random_density(const GridSpec& g, double lo, double hi,
                            unsigned seed) {
  std::mt19937_64 rng(seed);
  DensityField r = make_density(g);
  for (double& v : r.values)
    v = lo + (hi - lo) * (double(rng() >> 11) * 0x1.0p-53);
  return r;
}

MomentumField random_momentum(const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  MomentumField m = make_momentum(g);
  for (int q = 0; q < m.dim; ++q)
    for (double& v : m.comp[q]) v = -1.0 + 2.0 * (double(rng() >> 11) * 0x1.0p-53);
  return m;
}

}  // namespace

static void BM_ApplyDiv2D(benchmark::State& state) {
  GridSpec g{2, static_cast<int>(state.range(0)), 1.0 / state.range(0), {0, 0}};
  MomentumField m = random_momentum(g, 1);
  DensityField out = make_density(g);
  for (auto _ : state) {
    apply_div(m, g, out);
    benchmark::DoNotOptimize(out.values.data());
  }
}
BENCHMARK(BM_ApplyDiv2D)->Arg(64)->Arg(128);

static void BM_DctSolve2D(benchmark::State& state) {
  GridSpec g{2, static_cast<int>(state.range(0)), 1.0 / state.range(0), {0, 0}};
  SpectralSolver solver(g, SpectralBC::Neumann);
  DensityField rhs = random_density(g, -1, 1, 2);
  std::vector<double> x(g.num_cells());
  for (auto _ : state) {
    solver.solve_shifted_laplacian(rhs.values, x, 1.0, 1.0);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_DctSolve2D)->Arg(64)->Arg(128);

static void BM_ParabolaProjection(benchmark::State& state) {
  GridSpec g{2, 64, 1.0 / 64, {0, 0}};
  DensityField phi0 = random_density(g, -2, 2, 3);
  CellVectorField psi0 = make_cell_vector(g);
  std::mt19937_64 rng(4);
  for (int q = 0; q < 2; ++q)
    for (double& v : psi0.comp[q])
      v = -2.0 + 4.0 * (double(rng() >> 11) * 0x1.0p-53);
  for (auto _ : state) {
    DensityField phi = phi0;
    CellVectorField psi = psi0;
    project_parabola_field(phi, psi);
    benchmark::DoNotOptimize(phi.values.data());
  }
}
BENCHMARK(BM_ParabolaProjection);

static void BM_PrimalProjectionWarm(benchmark::State& state) {
  GridSpec g{2, 64, 1.0 / 64, {0, 0}};
  BoxBounds box{-1.0, 1.0};
  PrimalProjector proj(g, box);
  DensityField prev = random_density(g, -0.9, 0.9, 5);
  DensityField rho0 = random_density(g, -1.1, 1.1, 6);
  MomentumField m0 = random_momentum(g, 7);
  DensityField rho;
  MomentumField m;
  proj.project(rho0, m0, prev, rho, m);  // settle the active set
  for (auto _ : state) {
    proj.project(rho0, m0, prev, rho, m);
    benchmark::DoNotOptimize(rho.values.data());
  }
}
BENCHMARK(BM_PrimalProjectionWarm);

static void BM_SaddleIteration(benchmark::State& state) {
  Preset ps = load_preset("cahn_hilliard");
  GridSpec g = ps.make_grid();
  GradientFlowProblem p = ps.make_problem(g);
  DensityField rho0 = ps.initial(g, ps.default_seed);
  SolverConfig cfg = ps.solver;
  cfg.iter_max = 1;
  cfg.check_stepsize = false;
  SaddleWorkspace ws(p);
  for (auto _ : state) {
    SaddleResult r = solve_saddle(rho0, p, cfg, ps.loop.dt, &ws);
    benchmark::DoNotOptimize(r.rho.values.data());
  }
}
BENCHMARK(BM_SaddleIteration);

BENCHMARK_MAIN();
