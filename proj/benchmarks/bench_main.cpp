#include <benchmark/benchmark.h>

#include "expphi2/fft.hpp"
#include "expphi2/gff.hpp"
#include "expphi2/gmc.hpp"
#include "expphi2/norms.hpp"
#include "expphi2/solver.hpp"

using namespace expphi2;

static void BM_TransformRoundTrip(benchmark::State& state) {
  const TorusGrid grid(static_cast<int>(state.range(0)));
  RngStream rng(1, 0);
  const GffSample phi = sample_gff(grid, rng);
  TorusField f = from_spectral_unchecked(phi.spectral);
  for (auto _ : state) {
    f = from_spectral_unchecked(to_spectral(f));
    benchmark::DoNotOptimize(f.values.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TransformRoundTrip)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Complexity();

static void BM_SampleGff(benchmark::State& state) {
  const TorusGrid grid(static_cast<int>(state.range(0)));
  std::uint64_t stream = 0;
  for (auto _ : state) {
    RngStream rng(1, stream++);
    const GffSample s = sample_gff(grid, rng);
    benchmark::DoNotOptimize(s.spectral.coeffs.data());
  }
}
BENCHMARK(BM_SampleGff)->Arg(128)->Arg(256)->Arg(512);

static void BM_WickExponential(benchmark::State& state) {
  const TorusGrid grid(static_cast<int>(state.range(0)));
  const MultiplierSpec spec = MultiplierSpec::make(MultiplierKind::sharp_square);
  const ChargeParams params = ChargeParams::defaults_for(std::sqrt(2.0 * kPi));
  RngStream rng(1, 0);
  const GffSample phi = sample_gff(grid, rng);
  for (auto _ : state) {
    const WickSample w = wick_exponential(phi.spectral, spec, 3, params);
    benchmark::DoNotOptimize(w.total_mass);
  }
}
BENCHMARK(BM_WickExponential)->Arg(128)->Arg(256)->Arg(512);

static void BM_OuStep(benchmark::State& state) {
  const TorusGrid grid(static_cast<int>(state.range(0)));
  RngStream rng(1, 0);
  OuState s;
  s.spectral = sample_gff(grid, rng).spectral;
  for (auto _ : state) {
    s = ou_step(s, 0.01, rng);
    benchmark::DoNotOptimize(s.spectral.coeffs.data());
  }
}
BENCHMARK(BM_OuStep)->Arg(128)->Arg(256);

static void BM_SolverStepSplit(benchmark::State& state) {
  SolverConfig c;
  c.params = ChargeParams::defaults_for(std::sqrt(kPi));
  c.spec = MultiplierSpec::make(MultiplierKind::sharp_square);
  c.n_level = 2;
  c.grid_m = static_cast<int>(state.range(0));
  c.dt = 1e-2;
  c.horizon = 1e-2;  // one step per solve
  RngStream init(1, 0);
  const TorusField f0 = from_spectral_unchecked(sample_gff(c.grid(), init).spectral);
  std::uint64_t stream = 1;
  for (auto _ : state) {
    RngStream rng(1, stream++);
    const SolverTrajectory t = solve_split(c, f0, rng);
    benchmark::DoNotOptimize(t.phi_final().values.data());
  }
}
BENCHMARK(BM_SolverStepSplit)->Arg(64)->Arg(128)->Arg(256);

static void BM_BesovNorm(benchmark::State& state) {
  const TorusGrid grid(static_cast<int>(state.range(0)));
  RngStream rng(1, 0);
  const TorusField f = from_spectral_unchecked(sample_gff(grid, rng).spectral);
  for (auto _ : state) {
    const BesovNorm b = besov_norm(f, -0.5, 1.5, 1.5);
    benchmark::DoNotOptimize(b.value);
  }
}
BENCHMARK(BM_BesovNorm)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
