#include <random>

#include <benchmark/benchmark.h>

#include "harmonics/graph.hpp"
#include "harmonics/simulate.hpp"
#include "harmonics/solver.hpp"
#include "harmonics/stiefel.hpp"

namespace {

using namespace harmonics;

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

StiefelPoint random_point(Index n, Index p, std::uint64_t seed) {
  return StiefelPoint(polar_factor(random_matrix(n, p, seed)));
}

void BM_Expm(benchmark::State& state) {
  const Index k = state.range(0);
  const Matrix a = random_matrix(k, k, 1);
  const Matrix skew = 0.5 * (a - a.transpose());
  for (auto _ : state) benchmark::DoNotOptimize(expm(skew));
}
BENCHMARK(BM_Expm)->Arg(10)->Arg(60)->Arg(120);

void BM_ExpMap(benchmark::State& state) {
  const Index n = state.range(0), p = state.range(1);
  const StiefelPoint x = random_point(n, p, 2);
  const TangentVector v = project_to_tangent(x, 0.1 * random_matrix(n, p, 3));
  for (auto _ : state) benchmark::DoNotOptimize(exp_map(x, v));
}
BENCHMARK(BM_ExpMap)->Args({20, 5})->Args({148, 60});

void BM_Gpi(benchmark::State& state) {
  const Index n = state.range(0), p = state.range(1);
  std::mt19937_64 rng(4);
  const ShiftedLaplacian shifted =
      shift_positive_definite(build_laplacian(random_connected_graph(n, 0.2, rng)));
  const StiefelPoint psi = random_point(n, p, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gpi_refine(shifted, psi, psi, 0.01, 1e-10, 50));
  }
}
BENCHMARK(BM_Gpi)->Args({20, 5})->Args({148, 60});

void BM_Weiszfeld(benchmark::State& state) {
  const Index n = state.range(0), p = state.range(1);
  std::vector<StiefelPoint> points;
  const Matrix base = random_matrix(n, p, 6);
  for (std::uint64_t s = 0; s < 20; ++s) {
    points.push_back(StiefelPoint(polar_factor(base + 0.2 * random_matrix(n, p, 10 + s))));
  }
  WeiszfeldOptions o;
  o.lambda = 1.0 / 20.0;
  o.gamma = 0.5;
  o.max_iterations = 50;
  for (auto _ : state) benchmark::DoNotOptimize(weiszfeld_mean(points, points[0], o));
}
BENCHMARK(BM_Weiszfeld)->Args({20, 5})->Args({148, 60});

void BM_Learn(benchmark::State& state) {
  BlockCohortOptions co;
  co.nodes = state.range(0);
  co.subjects = 10;
  const auto cohort = block_cohort(co);
  SolverConfig config;
  config.harmonics = 5;
  for (auto _ : state) benchmark::DoNotOptimize(learn_common_harmonics(cohort, config));
}
BENCHMARK(BM_Learn)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
