#include <benchmark/benchmark.h>

#include <random>

#include "setpair/generators.hpp"
#include "setpair/pair.hpp"
#include "setpair/perturb.hpp"

using namespace setpair;

namespace {

Domain square() { return Domain::box(Point{-1.0, -1.0}, Point{1.0, 1.0}); }

void bm_iterate(benchmark::State& state) {
  Domain d = square();
  std::mt19937_64 rng(1);
  PairMap p = random_contraction_pair(d, NormKind::L2, rng, 0.5, 0.9);
  IterationParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(iterate(p, d, NormKind::L2, Point{0.9, 0.9}, params));
  }
}
BENCHMARK(bm_iterate);

void bm_exact_affine_distance(benchmark::State& state) {
  Domain d = square();
  std::mt19937_64 rng(2);
  MapExpr f = random_affine_contraction(d, NormKind::L2, rng);
  MapExpr g = random_affine_contraction(d, NormKind::L2, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(d_infty(f, g, d, NormKind::L2, 1));
  }
}
BENCHMARK(bm_exact_affine_distance);

void bm_pair_metric(benchmark::State& state) {
  Domain d = square();
  std::mt19937_64 rng(3);
  PairMap f = random_contraction_pair(d, NormKind::L2, rng);
  PairMap g = random_contraction_pair(d, NormKind::L2, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pair_h_infty(f, g, d, NormKind::L2, 20000));
  }
}
BENCHMARK(bm_pair_metric);

void bm_spectral_norm(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) a(i, j) = u(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_norm_power(a));
  }
}
BENCHMARK(bm_spectral_norm);

void bm_regularize(benchmark::State& state) {
  Domain d = square();
  std::mt19937_64 rng(5);
  const Point x0{0.15, -0.2};
  PairMap p = symmetric_tie_pair(d, NormKind::L2, x0, rng);
  IterationParams params;
  TrajectoryReport t = iterate(p, d, NormKind::L2, x0, params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        regularize_pair(p.first, p.second, d, NormKind::L2, t, 0.05, params));
  }
}
BENCHMARK(bm_regularize);

}  // namespace

BENCHMARK_MAIN();
