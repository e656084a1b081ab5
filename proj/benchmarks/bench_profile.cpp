#include <benchmark/benchmark.h>

#include <random>

#include "pattree/basis.hpp"
#include "pattree/profile.hpp"

using namespace pattree;

namespace {

ProfileRequest request(ProfileMethod m, int k, int n) {
  std::mt19937_64 rng(0xbe4c ^ static_cast<std::uint64_t>(n));
  ProfileRequest req;
  req.pi = random_permutation(n, rng);
  req.k = k;
  req.method = m;
  req.threads = 1;
  return req;
}

void run(benchmark::State& state, ProfileMethod m, int k) {
  const int n = static_cast<int>(state.range(0));
  const ProfileRequest req = request(m, k, n);
  (void)profile(req);  // builds the basis outside the timed loop
  for (auto _ : state) benchmark::DoNotOptimize(profile(req));
  state.SetComplexityN(n);
}

void BM_ProfileCorner3(benchmark::State& s) { run(s, ProfileMethod::corner, 3); }
void BM_ProfileQuad4(benchmark::State& s) { run(s, ProfileMethod::quad, 4); }
void BM_ProfileSubquad5(benchmark::State& s) { run(s, ProfileMethod::subquad5, 5); }
void BM_ProfileGeneric4(benchmark::State& s) { run(s, ProfileMethod::generic, 4); }
void BM_ProfileBrute4(benchmark::State& s) { run(s, ProfileMethod::brute, 4); }

BENCHMARK(BM_ProfileCorner3)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Complexity()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProfileQuad4)->RangeMultiplier(2)->Range(50, 200)->Complexity()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProfileSubquad5)->Arg(250)->Arg(500)->Arg(1000)->Complexity()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProfileGeneric4)->RangeMultiplier(2)->Range(50, 200)->Complexity()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProfileBrute4)->RangeMultiplier(2)->Range(25, 100)->Complexity()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
