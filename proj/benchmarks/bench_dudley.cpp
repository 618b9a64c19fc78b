#include <benchmark/benchmark.h>

#include "dudley/dudley.hpp"
#include "dudley/linprog.hpp"
#include "dudley/packing.hpp"
#include "dudley/projection.hpp"
#include "dudley/random.hpp"

using namespace dudley;

namespace {

std::vector<Vector> sphere_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vector> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_unit(rng, d));
  return v;
}

void BM_BuildPacking(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const double delta = static_cast<double>(state.range(1)) / 100.0;
  std::size_t n = 0;
  for (auto _ : state) {
    const SpherePacking p = build_packing(d, Vector::Zero(static_cast<Eigen::Index>(d)), 4.0, delta, 1);
    n = p.size();
    benchmark::DoNotOptimize(n);
  }
  state.counters["points"] = static_cast<double>(n);
}
BENCHMARK(BM_BuildPacking)->Args({2, 10})->Args({3, 50})->Args({3, 20})->Args({4, 50})->Unit(benchmark::kMillisecond);

void BM_Project(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const VPolytope body(sphere_points(static_cast<std::size_t>(state.range(1)), d, 3));
  const auto queries = sphere_points(256, d, 4);
  std::size_t i = 0;
  for (auto _ : state) {
    const ProjectionResult r = project(body, 3.0 * queries[i++ % queries.size()]);
    benchmark::DoNotOptimize(r.distance);
  }
}
BENCHMARK(BM_Project)->Args({2, 64})->Args({3, 64})->Args({3, 512});

void BM_LpMaximize(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  std::vector<Halfspace> hs;
  for (const auto& u : sphere_points(m, 3, 5)) hs.emplace_back(u, 1.0);
  const HPolytope P(std::move(hs));
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  to_matrix(P, A, b);
  const auto dirs = sphere_points(256, 3, 6);
  std::size_t i = 0;
  for (auto _ : state) {
    const LPResult r = lp_maximize(dirs[i++ % dirs.size()], A, b);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_LpMaximize)->Arg(16)->Arg(256)->Arg(4096);

void BM_Approximate(benchmark::State& state) {
  DudleyConfig cfg;
  cfg.epsilon = static_cast<double>(state.range(0)) / 1000.0;
  cfg.verify_directions = 0;
  const Body disk = Ball(Vector::Zero(2), 1.0);
  for (auto _ : state) {
    auto [c, r] = approximate(disk, cfg);
    benchmark::DoNotOptimize(r.halfspace_count);
  }
}
BENCHMARK(BM_Approximate)->Arg(100)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
