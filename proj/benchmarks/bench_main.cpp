#include "ddfv/operators.hpp"
#include "ddfv/solver.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace ddfv;

namespace {

DiscreteFunctionBar random_state(const DdfvMesh& m, unsigned seed) {
  std::mt19937_64 r(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  DiscreteFunctionBar u = zeros_bar(m);
  for (int K = 0; K < m.n_primal_interior; ++K) u.primal[K] = U(r);
  for (int K = 0; K < m.n_dual_interior; ++K) u.dual[K] = U(r);
  return u;
}

void BM_BuildMesh2d(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(build_structured_2d(n, n));
  st.SetComplexityN(n * n);
}
BENCHMARK(BM_BuildMesh2d)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BuildMesh3d(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(build_structured_3d(n, n, n));
}
BENCHMARK(BM_BuildMesh3d)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_GradientDivergence(benchmark::State& st) {
  const DdfvMesh m = build_structured_2d(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)));
  const DiscreteFunctionBar w = random_state(m, 1);
  for (auto _ : st) benchmark::DoNotOptimize(divergence(m, gradient(m, w)));
}
BENCHMARK(BM_GradientDivergence)->Arg(16)->Arg(64);

void BM_Penalization(benchmark::State& st) {
  const DdfvMesh m = build_structured_2d(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)));
  const DiscreteFunctionBar w = random_state(m, 2);
  for (auto _ : st) benchmark::DoNotOptimize(penalization(m, w));
}
BENCHMARK(BM_Penalization)->Arg(16)->Arg(64);

void BM_Convection(benchmark::State& st) {
  const DdfvMesh m = build_structured_2d(32, 32);
  const ProblemSpec s = builtin_problem("burgers_diffusion(0)");
  const auto g = make_flux(s, static_cast<FluxScheme>(st.range(0)), 1.0);
  const DiscreteFunctionBar u = random_state(m, 3);
  for (auto _ : st) benchmark::DoNotOptimize(convection_divergence(m, u, *g));
  st.SetLabel(to_string(g->scheme()));
}
BENCHMARK(BM_Convection)->DenseRange(0, 3);

void BM_Residual(benchmark::State& st) {
  const DdfvMesh m = build_structured_2d(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)));
  const ProblemSpec s = builtin_problem("polytropic(2,3)");
  const auto g = make_flux(s, FluxScheme::Godunov, 1.0);
  const DiscreteFunctionBar u = random_state(m, 4);
  const DiscreteFunction prev = u.interior(m), S = zeros(m);
  for (auto _ : st) benchmark::DoNotOptimize(residual(m, s, *g, u, prev, S, 0.01));
}
BENCHMARK(BM_Residual)->Arg(16)->Arg(32);

void BM_HeatStep(benchmark::State& st) {
  const DdfvMesh m = build_structured_2d(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)));
  const ProblemSpec s = builtin_problem("heat");
  SchemeConfig cfg;
  cfg.dt = 0.01;
  cfg.T = 0.01;
  for (auto _ : st) benchmark::DoNotOptimize(run(s, m, cfg));
}
BENCHMARK(BM_HeatStep)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
