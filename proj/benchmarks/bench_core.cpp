// Microbenchmarks for the solver hot paths: both advection kernels across
// truncations, a full integrator step, and the samplers feeding ensembles.

#include <benchmark/benchmark.h>

#include "nstorus/dynamics.hpp"
#include "nstorus/forcing.hpp"
#include "nstorus/rng.hpp"

using namespace nstorus;

namespace {

SpectralField random_field(int M, std::uint64_t seed) {
  RngStream rng(seed, 0);
  SpectralField u(M);
  for (const auto& id : basis_enumerate(M)) {
    if (id.is_mean()) continue;
    u.set_coeff(id, rng.gaussian() / static_cast<double>(id.eigenvalue()));
  }
  return u;
}

void BM_bilinear_direct(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const SpectralField u = random_field(M, 1), v = random_field(M, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(bilinear(u, v, NonlinearityPath::direct_convolution));
}
BENCHMARK(BM_bilinear_direct)->Arg(4)->Arg(8)->Arg(12);

void BM_bilinear_pseudospectral(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const SpectralField u = random_field(M, 1), v = random_field(M, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(bilinear(u, v, NonlinearityPath::pseudospectral));
}
BENCHMARK(BM_bilinear_pseudospectral)->Arg(4)->Arg(8)->Arg(12)->Arg(16);

void BM_resolve_unit_time(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  SimParams p;
  p.nu = 0.1;
  p.truncation = M;
  p.dt = 1e-2;
  p.nonlinearity = NonlinearityPath::pseudospectral;
  const SpectralField u0 = random_field(M, 3);
  const ForcingSignal g = ForcingSignal::constant(random_field(M, 4), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(resolve(u0, g, 1.0, p));
}
BENCHMARK(BM_resolve_unit_time)->Arg(4)->Arg(8);

void BM_sample_decomposable(benchmark::State& state) {
  const SubspaceSpec ids = SubspaceSpec::first_oscillatory(16, 4);
  const CoefficientLaw law = CoefficientLaw::geometric(ids, ScalarLaw::gaussian);
  RngStream rng(7, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_decomposable(law, 4, rng));
}
BENCHMARK(BM_sample_decomposable);

void BM_kick_chain(benchmark::State& state) {
  SimParams p;
  p.nu = 0.1;
  p.truncation = 4;
  p.dt = 1e-2;
  p.nonlinearity = NonlinearityPath::pseudospectral;
  const SubspaceSpec ids = SubspaceSpec::first_oscillatory(8, 4);
  const CoefficientLaw law = CoefficientLaw::finite(ids, ScalarLaw::gaussian, 0.5);
  RngStream rng(11, 0);
  const KickSequence ks = sample_kicks(law, 4, 0.5, 4, rng);
  const SpectralField u0 = random_field(4, 5);
  for (auto _ : state) benchmark::DoNotOptimize(kick_chain(ks, u0, p));
}
BENCHMARK(BM_kick_chain);

}  // namespace

BENCHMARK_MAIN();
