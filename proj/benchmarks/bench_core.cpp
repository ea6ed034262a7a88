#include <benchmark/benchmark.h>

#include <sbflow/cloud.hpp>
#include <sbflow/gaussian.hpp>
#include <sbflow/langevin.hpp>
#include <sbflow/metrics.hpp>
#include <sbflow/scheme.hpp>
#include <sbflow/sinkhorn.hpp>

namespace {

using namespace sbflow;

MixtureSpec two_bump() {
  MixtureSpec spec;
  spec.components.push_back({0.5, {-2.0}, 1.0});
  spec.components.push_back({0.5, {2.0}, 1.0});
  return spec;
}

// Args: {n, epsilon in thousandths}. Small epsilon exercises the sorted
// window truncation, large epsilon the wide-support regime.
void BM_SinkhornSolve(benchmark::State& state) {
  ParticleCloud cloud =
      sample_mixture(two_bump(), static_cast<int>(state.range(0)), 1);
  double eps = static_cast<double>(state.range(1)) / 1000.0;
  for (auto _ : state) {
    SinkhornSolution sol = solve_symmetric(cloud, eps);
    benchmark::DoNotOptimize(sol.potential.data());
  }
}
BENCHMARK(BM_SinkhornSolve)
    ->Args({128, 100})
    ->Args({512, 100})
    ->Args({2048, 100})
    ->Args({512, 10})
    ->Args({2048, 10})
    ->Unit(benchmark::kMillisecond);

void BM_BarycentricProjection(benchmark::State& state) {
  ParticleCloud cloud =
      sample_mixture(two_bump(), static_cast<int>(state.range(0)), 1);
  SinkhornSolution sol = solve_symmetric(cloud, 0.1);
  for (auto _ : state) {
    ParticleCloud b = barycentric_projection(sol);
    benchmark::DoNotOptimize(b.points.data());
  }
}
BENCHMARK(BM_BarycentricProjection)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_BridgeStepParticles(benchmark::State& state) {
  ParticleCloud cloud =
      sample_mixture(two_bump(), static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    ParticleCloud next = sb_step_particles_heat(cloud, 0.1);
    benchmark::DoNotOptimize(next.points.data());
  }
}
BENCHMARK(BM_BridgeStepParticles)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

// 1000 closed-form steps per iteration.
void BM_RunSchemeGaussian(benchmark::State& state) {
  SchemeConfig config;
  config.epsilon = 1e-3;
  config.horizon = 1.0;
  config.functional = {FunctionalKind::Entropy, 0.0};
  GaussianState start = GaussianState::centered(1.0);
  for (auto _ : state) {
    FlowTrajectory<GaussianState> traj = run_scheme_gaussian(config, start);
    benchmark::DoNotOptimize(traj.states.data());
  }
}
BENCHMARK(BM_RunSchemeGaussian)->Unit(benchmark::kMicrosecond);

void BM_W2Empirical1d(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  ParticleCloud a = sample_mixture(two_bump(), n, 2);
  ParticleCloud b = sample_mixture(two_bump(), n, 3);
  for (auto _ : state) {
    double d = w2_empirical_1d(a, b);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_W2Empirical1d)->Arg(1024)->Arg(8192)->Unit(benchmark::kMicrosecond);

void BM_EulerMaruyama(benchmark::State& state) {
  ParticleCloud start = sample_mixture(two_bump(), 1024, 4);
  DriftSpec drift;
  drift.description = "x";
  drift.grad_g = [](std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
  };
  for (auto _ : state) {
    ParticleCloud end = euler_maruyama(drift, start, 0.1, 16, 5);
    benchmark::DoNotOptimize(end.points.data());
  }
}
BENCHMARK(BM_EulerMaruyama)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
