#include <benchmark/benchmark.h>

#include <random>

#include "gridpos/additive.hpp"
#include "gridpos/affine.hpp"
#include "gridpos/census.hpp"
#include "gridpos/search.hpp"

using namespace gridpos;

static std::vector<LatticePoint> random_points(std::size_t d, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Coord> coord(1, 50);  // keeps d = 8 minors inside int64
  std::vector<LatticePoint> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Coord> c(d);
    for (auto& x : c) x = coord(rng);
    out.emplace_back(std::move(c));
  }
  return out;
}

static void BM_AffineRank(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto pts = random_points(d, d + 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(affine_rank(pts));
}
BENCHMARK(BM_AffineRank)->Arg(2)->Arg(3)->Arg(4)->Arg(6)->Arg(8);

static void BM_CensusExhaustive(benchmark::State& state) {
  const auto grid = PointSet::full_grid(2, static_cast<Coord>(state.range(0)));
  CensusOptions opt;
  for (auto _ : state) benchmark::DoNotOptimize(count_nondegenerate(grid, 2, opt));
  state.SetLabel("k=2, d=2");
}
BENCHMARK(BM_CensusExhaustive)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_CensusPairBased(benchmark::State& state) {
  const auto grid = PointSet::full_grid(3, static_cast<Coord>(state.range(0)));
  CensusOptions opt;
  opt.mode = CensusMode::PairBased;
  for (auto _ : state) benchmark::DoNotOptimize(census(grid, 2, opt));
}
BENCHMARK(BM_CensusPairBased)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_NoThreeInLine(benchmark::State& state) {
  SearchConfig cfg;
  cfg.n = static_cast<Coord>(state.range(0));
  cfg.use_symmetry = state.range(1) != 0;
  std::uint64_t nodes = 0;
  for (auto _ : state) nodes = max_grid_set(cfg).nodes;
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_NoThreeInLine)->Args({4, 0})->Args({4, 1})->Args({5, 1})->Unit(benchmark::kMillisecond);

static void BM_MeetInTheMiddle(benchmark::State& state) {
  std::vector<LatticePoint> pts;
  for (Coord x = 1; x <= state.range(0); ++x) pts.push_back(LatticePoint{x * x});
  const PointSet V(1, state.range(0) * state.range(0), pts);
  EquationSpec spec;
  spec.coeffs = {3, 1, -2, -2};
  for (auto _ : state) benchmark::DoNotOptimize(find_nontrivial_solution(V, spec));
}
BENCHMARK(BM_MeetInTheMiddle)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
