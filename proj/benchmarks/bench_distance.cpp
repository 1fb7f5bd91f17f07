#include "gatedist/control.hpp"
#include "gatedist/fidelity.hpp"
#include "gatedist/random.hpp"
#include "gatedist/spectral.hpp"

#include <benchmark/benchmark.h>

using namespace gatedist;

namespace {

BipartiteUnitary make_instance(int n_s, int n_b, std::uint64_t seed) {
  Rng rng(seed);
  return BipartiteUnitary{haar_unitary(n_s * n_b, rng), n_s, n_b,
                          Ordering::SystemFirst};
}

void BM_frob_distance(benchmark::State& state) {
  const int n_s = int(state.range(0));
  const int n_b = int(state.range(1));
  const BipartiteUnitary u = make_instance(n_s, n_b, 1);
  const Matrix g = haar_unitary(n_s, 2);
  for (auto _ : state) {
    auto report = frob_distance(u, g);
    benchmark::DoNotOptimize(report.distance);
  }
}
BENCHMARK(BM_frob_distance)
    ->Args({2, 2})
    ->Args({3, 3})
    ->Args({4, 4})
    ->Args({8, 8});

void BM_spectral_subgradient_step(benchmark::State& state) {
  const int n_s = int(state.range(0));
  const int n_b = int(state.range(1));
  const BipartiteUnitary u = make_instance(n_s, n_b, 3);
  const Matrix g = haar_unitary(n_s, 4);
  Rng rng(5);
  const Matrix phi = 0.5 * haar_unitary(n_b, rng);
  for (auto _ : state) {
    const Matrix grad = spectral_subgradient(u, g, phi);
    benchmark::DoNotOptimize(project_spectral_ball(phi - 0.01 * grad));
  }
}
BENCHMARK(BM_spectral_subgradient_step)->Args({2, 2})->Args({3, 3})->Args({4, 4});

void BM_kraus_extraction(benchmark::State& state) {
  const int n_s = int(state.range(0));
  const int n_b = int(state.range(1));
  const BipartiteUnitary u = make_instance(n_s, n_b, 6);
  Rng rng(7);
  const EnvState env{haar_state(n_b, rng)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(kraus_from_unitary(u, env));
  }
}
BENCHMARK(BM_kraus_extraction)->Args({2, 2})->Args({4, 3})->Args({8, 4});

void BM_f_lower(benchmark::State& state) {
  const int n_s = int(state.range(0));
  const BipartiteUnitary u = make_instance(n_s, 2, 8);
  Rng rng(9);
  const Matrix g = haar_unitary(n_s, 10);
  const KrausSet kraus = kraus_from_unitary(u, EnvState{haar_state(2, rng)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_lower(kraus, g).value);
  }
}
BENCHMARK(BM_f_lower)->Arg(2)->Arg(3)->Arg(4);

void BM_propagate(benchmark::State& state) {
  const int segments = int(state.range(0));
  Rng rng(11);
  ControlProblem p;
  p.n_s = 2;
  p.n_b = 2;
  p.segments = segments;
  p.dt = 0.2;
  p.h_drift = 0.3 * random_hermitian(4, rng);
  p.h_controls = {random_hermitian(4, rng), random_hermitian(4, rng)};
  p.theta_set = ThetaBox{RealVector::Constant(2 * segments, -2.0),
                         RealVector::Constant(2 * segments, 2.0)};
  p.g_target = haar_unitary(2, rng);
  RealVector theta(2 * segments);
  for (int i = 0; i < theta.size(); ++i) theta(i) = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(p, theta).matrix);
  }
}
BENCHMARK(BM_propagate)->Arg(4)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
