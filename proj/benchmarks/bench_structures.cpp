#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "pattree/gadgets.hpp"
#include "pattree/pair_rect_tree.hpp"
#include "pattree/permutation.hpp"
#include "pattree/rect_tree.hpp"

using namespace pattree;

namespace {

Permutation sample(int n) {
  std::mt19937_64 rng(0x5eed + static_cast<std::uint64_t>(n));
  return random_permutation(n, rng);
}

void BM_RectTreeBuild2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Permutation pi = sample(n);
  for (auto _ : state) {
    RectangleTree t(2, n);
    for (int i = 1; i <= n; ++i) {
      const int p[2] = {i, pi(i)};
      t.insert(p, Integer(1));
    }
    t.freeze();
    benchmark::DoNotOptimize(t.point_count());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_RectTreeBuild2D)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_RectTreeQuery4D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Permutation pi = sample(n);
  BasicRectangleTree<std::int64_t> t(4, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const int p[4] = {i, j, pi(i), pi(j)};
      t.insert(p, 1);
    }
  }
  t.freeze();
  std::mt19937_64 rng(7);
  for (auto _ : state) {
    Rectangle r(4);
    for (auto& s : r) {
      int a = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
      int b = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
      if (a > b) std::swap(a, b);
      s = {a, b};
    }
    benchmark::DoNotOptimize(t.query(r));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_RectTreeQuery4D)->RangeMultiplier(2)->Range(64, 256)->Complexity();

void BM_PairRectTreeQuery(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int q = static_cast<int>(state.range(1));
  const Permutation pi = sample(n);
  const PairRectangleTree prt(pi, q);
  std::mt19937_64 rng(11);
  for (auto _ : state) {
    int x0 = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
    int x1 = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
    if (x0 > x1) std::swap(x0, x1);
    benchmark::DoNotOptimize(prt.query({x0, x1}, {1, n}, Direction::ascending));
  }
}
BENCHMARK(BM_PairRectTreeQuery)->Args({1000, 1})->Args({1000, 32})->Args({1000, 1000});

void BM_Marked3214(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Permutation pi = sample(n);
  const std::vector<WeightFn> w(4, [](int) { return Integer(1); });
  for (auto _ : state) benchmark::DoNotOptimize(weighted_marked_3214(pi, w).total());
  state.SetComplexityN(n);
}
BENCHMARK(BM_Marked3214)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Complexity()->Unit(benchmark::kMillisecond);

void BM_Marked43215(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Permutation pi = sample(n);
  for (auto _ : state) benchmark::DoNotOptimize(marked_43215(pi).total());
  state.SetComplexityN(n);
}
BENCHMARK(BM_Marked43215)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Complexity()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
