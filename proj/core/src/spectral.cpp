#include "wgf/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "wgf/errors.hpp"

namespace wgf {

namespace {

// fftw plan creation is not thread-safe; executions on distinct arrays are.
// Plans are cached for the process lifetime, created unaligned so they can
// run on any caller-provided buffer.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

using PlanKey = std::tuple<int, int, int, int>;  // dim, n, bc, direction

fftw_plan cached_plan(int dim, int n, SpectralBC bc, bool forward) {
  static std::map<PlanKey, fftw_plan> cache;
  PlanKey key{dim, n, static_cast<int>(bc), forward ? 0 : 1};
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::size_t total = dim == 1 ? (std::size_t)n : (std::size_t)n * n;
  double* scratch = fftw_alloc_real(total);
  fftw_r2r_kind kind;
  if (bc == SpectralBC::Neumann)
    kind = forward ? FFTW_REDFT10 : FFTW_REDFT01;
  else
    kind = forward ? FFTW_R2HC : FFTW_HC2R;
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan p;
  if (dim == 1)
    p = fftw_plan_r2r_1d(n, scratch, scratch, kind, flags);
  else
    p = fftw_plan_r2r_2d(n, n, scratch, scratch, kind, kind, flags);
  fftw_free(scratch);
  if (!p) throw Error("fftw plan creation failed");
  cache.emplace(key, p);
  return p;
}

}  // namespace

SpectralSolver::SpectralSolver(const GridSpec& g, SpectralBC bc)
    : grid_(g), bc_(bc) {
  const int n = g.n;
  const double h2 = g.h * g.h;
  eig_axis_.resize(n);
  if (bc == SpectralBC::Neumann) {
    for (int k = 0; k < n; ++k)
      eig_axis_[k] = (2.0 / h2) * (1.0 - std::cos(M_PI * k / n));
    norm_ = std::pow(2.0 * n, g.dim);
  } else {
    // Halfcomplex index a maps to frequency a for a <= n/2 and n-a above;
    // the eigenvalue is the same for k and n-k, so per-index scaling is exact.
    for (int a = 0; a < n; ++a) {
      int k = (a <= n / 2) ? a : n - a;
      eig_axis_[a] = (2.0 / h2) * (1.0 - std::cos(2.0 * M_PI * k / n));
    }
    norm_ = std::pow(static_cast<double>(n), g.dim);
  }
  plan_fwd_ = cached_plan(g.dim, n, bc, true);
  plan_bwd_ = cached_plan(g.dim, n, bc, false);
  buf_.resize(g.num_cells());
}

void SpectralSolver::apply_multiplier(
    const std::vector<double>& in, std::vector<double>& out,
    const std::function<double(double)>& factor) const {
  if (in.size() != grid_.num_cells())
    throw DimensionError("SpectralSolver: field does not conform to grid");
  buf_ = in;
  const int n = grid_.n;
  if (n == 1) {
    out.resize(1);
    out[0] = in[0] * factor(0.0);
    return;
  }
  fftw_execute_r2r(static_cast<fftw_plan>(plan_fwd_), buf_.data(), buf_.data());
  if (grid_.dim == 1) {
    for (int k = 0; k < n; ++k) buf_[k] *= factor(eig_axis_[k]) / norm_;
  } else {
    for (int b = 0; b < n; ++b) {
      const double lb = eig_axis_[b];
      for (int a = 0; a < n; ++a)
        buf_[(std::size_t)b * n + a] *= factor(eig_axis_[a] + lb) / norm_;
    }
  }
  fftw_execute_r2r(static_cast<fftw_plan>(plan_bwd_), buf_.data(), buf_.data());
  out = buf_;
}

void SpectralSolver::solve_shifted_laplacian(const std::vector<double>& rhs,
                                             std::vector<double>& x, double a,
                                             double b) const {
  apply_multiplier(rhs, x, [a, b](double lam) { return 1.0 / (a + b * lam); });
}

namespace {
std::mutex& dct_cache_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

void solve_identity_plus_div_divT(const DensityField& rhs, const GridSpec& g,
                                  double scale, DensityField& x) {
  check_conforms(rhs, g, "solve_identity_plus_div_divT");
  if (scale < 0.0)
    throw std::invalid_argument("solve_identity_plus_div_divT: scale < 0");
  // One solver per grid signature; guarded because the free-function entry
  // point may be hit from several threads.
  static std::map<std::tuple<int, int, long long>, SpectralSolver> cache;
  std::tuple<int, int, long long> key{
      g.dim, g.n, static_cast<long long>(g.h * 1e15)};
  SpectralSolver* solver;
  {
    std::lock_guard<std::mutex> lock(dct_cache_mutex());
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, SpectralSolver(g, SpectralBC::Neumann)).first;
    solver = &it->second;
    // Serialized use of the shared buffer happens under the same lock.
    solver->solve_shifted_laplacian(rhs.values, x.values, 1.0, scale);
  }
}

DensityField solve_identity_plus_div_divT(const DensityField& rhs,
                                          const GridSpec& g, double scale) {
  DensityField x;
  solve_identity_plus_div_divT(rhs, g, scale, x);
  return x;
}

}  // namespace wgf
