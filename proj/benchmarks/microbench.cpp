// Microbenchmarks for the hot paths: the two eigensolver backends and
// the AGD inner loop. Wall time only; oracle-call counts are the
// quantity the acceptance tests check.

#include <hfopt/agd.hpp>
#include <hfopt/eigensolver.hpp>
#include <hfopt/problems.hpp>

#include <benchmark/benchmark.h>

namespace {

void bm_lanczos(benchmark::State& state) {
  hfopt::TestProblem p = hfopt::make_problem("ncquadratic:d=" + std::to_string(state.range(0)), 7);
  const double eps_add = 0.01 * p.params.l1;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto est = hfopt::min_eigvec_lanczos(*p.oracle, p.start, eps_add, 0.1, p.params.l1, ++seed);
    benchmark::DoNotOptimize(est.rayleigh);
  }
}
BENCHMARK(bm_lanczos)->Arg(20)->Arg(50)->Arg(100);

void bm_power(benchmark::State& state) {
  hfopt::TestProblem p = hfopt::make_problem("ncquadratic:d=" + std::to_string(state.range(0)), 7);
  const double eps_add = 0.01 * p.params.l1;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto est = hfopt::min_eigvec_power(*p.oracle, p.start, eps_add, 0.1, p.params.l1, ++seed);
    benchmark::DoNotOptimize(est.rayleigh);
  }
}
BENCHMARK(bm_power)->Arg(20)->Arg(50);

void bm_agd_quadratic(benchmark::State& state) {
  hfopt::TestProblem p = hfopt::make_problem("quadratic:d=50:kappa=100", 7);
  hfopt::AgdOptions opts;
  opts.delta_g = p.params.delta_f;
  for (auto _ : state) {
    auto r = hfopt::accelerated_gradient_descent(*p.oracle, p.start, 1e-6, p.params.l1,
                                                 p.params.l1 / 100.0, opts);
    benchmark::DoNotOptimize(r.y);
  }
}
BENCHMARK(bm_agd_quadratic);

}  // namespace

BENCHMARK_MAIN();
