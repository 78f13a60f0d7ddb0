#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "rankent/decomposition.hpp"
#include "rankent/maxent.hpp"
#include "rankent/regularity.hpp"
#include "rankent/rng.hpp"
#include "rankent/tournament.hpp"

namespace {

using namespace rankent;

void bm_fit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Tournament t = Tournament::random(n, 17);
  const ArcSet d = t.arc_set();
  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 1);
  Rng rng(3);
  rng.shuffle(images);
  const Permutation sigma(images);
  for (auto _ : state) benchmark::DoNotOptimize(fit(sigma, d));
}
BENCHMARK(bm_fit)->Arg(16)->Arg(64)->Arg(256);

void bm_regular_exact(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Tournament t = Tournament::random(2 * side, 23);
  std::vector<int> left(static_cast<std::size_t>(side)), right(static_cast<std::size_t>(side));
  std::iota(left.begin(), left.end(), 1);
  std::iota(right.begin(), right.end(), side + 1);
  const BigraphView view = BigraphView::from_tournament(t, BipartitePair(left, right));
  for (auto _ : state) benchmark::DoNotOptimize(is_regular_exact(view, 0.3));
}
BENCHMARK(bm_regular_exact)->Arg(6)->Arg(8)->Arg(10);

void bm_build_tree(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Tournament t = Tournament::random(n, 29);
  TreeBuildOptions opts;
  opts.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(build_tree(t, opts));
}
BENCHMARK(bm_build_tree)->Arg(27)->Arg(81)->Unit(benchmark::kMillisecond);

void bm_solve_maxent(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Tournament t = Tournament::transitive(n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_maxent({t, 0.2, 0.0}));
}
BENCHMARK(bm_solve_maxent)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
