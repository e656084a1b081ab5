#include <random>

#include "doctest.h"
#include "pattree/errors.hpp"
#include "pattree/evaluator.hpp"
#include "pattree/profile.hpp"
#include "test_support.hpp"

using namespace pattree;
using pattree::testing::naive_count;
using pattree::testing::perm;
using pattree::testing::random_perm;

namespace {

PatternVector naive_profile(const Permutation& pi, int k) {
  PatternVector out;
  for (int j = 1; j <= k; ++j) {
    for (const auto& tau : all_permutations(j)) out.add(tau, naive_count(tau, pi));
  }
  return out;
}

PatternVector run(const Permutation& pi, int k, ProfileMethod m, int threads = 1) {
  ProfileRequest r;
  r.pi = pi;
  r.k = k;
  r.method = m;
  r.threads = threads;
  return profile(r);
}

}  // namespace

TEST_CASE("method resolution") {
  CHECK(resolve_profile_method(ProfileMethod::automatic, 3) == ProfileMethod::subquad5);
  CHECK(resolve_profile_method(ProfileMethod::automatic, 5) == ProfileMethod::subquad5);
  CHECK(resolve_profile_method(ProfileMethod::automatic, 6) == ProfileMethod::quad);
  CHECK(resolve_profile_method(ProfileMethod::automatic, 7) == ProfileMethod::quad);
  CHECK(resolve_profile_method(ProfileMethod::automatic, 8) == ProfileMethod::generic);
  CHECK_THROWS_AS(resolve_profile_method(ProfileMethod::corner, 4), UsageError);
  CHECK_THROWS_AS(resolve_profile_method(ProfileMethod::subquad5, 6), UsageError);
  CHECK_THROWS_AS(resolve_profile_method(ProfileMethod::quad, 8), UsageError);
  CHECK_THROWS_AS(resolve_profile_method(ProfileMethod::brute, 0), UsageError);
  CHECK(parse_profile_method("auto") == ProfileMethod::automatic);
  CHECK(parse_profile_method("subquad-5") == ProfileMethod::subquad5);
  CHECK_THROWS_AS(parse_profile_method("fast"), UsageError);
}

TEST_CASE("identity permutation has binomial profile") {
  const PatternVector p = run(Permutation::identity(6), 3, ProfileMethod::corner);
  PatternVector expected;
  expected.add(perm("1"), 6);
  expected.add(perm("12"), 15);
  expected.add(perm("123"), 20);
  CHECK(p == expected);
}

TEST_CASE("2413 by the quadratic method") {
  const PatternVector p = run(perm("2413"), 3, ProfileMethod::quad);
  CHECK(p.layer(3) == PatternVector::parse_text("231\t1\n132\t1\n213\t1\n312\t1\n"));
  CHECK(p == naive_profile(perm("2413"), 3));
}

TEST_CASE("sub-quadratic 5-profile of a random S40 permutation, with no pair enumeration") {
  const Permutation pi = random_perm(40, 77);
  (void)run(pi, 5, ProfileMethod::subquad5);  // build the basis outside the counted run
  reset_evaluation_counters();
  const PatternVector p = run(pi, 5, ProfileMethod::subquad5);
  CHECK(evaluation_counters().large_vertex_enumerations == 0);
  CHECK(evaluation_counters().gadget_evaluations > 0);
  for (int j = 1; j <= 5; ++j) CHECK(p.layer(j) == profile_brute(pi, j));
}

TEST_CASE("generic profile examples") {
  const Permutation pi = random_perm(20, 5);
  std::int64_t asc = 0;
  for (int i = 1; i <= 20; ++i) {
    for (int j = i + 1; j <= 20; ++j) asc += pi(i) < pi(j) ? 1 : 0;
  }
  const PatternVector two = profile_generic(pi, 2);
  CHECK(two.get(perm("12")) == Integer(asc));
  CHECK(two.get(perm("21")) == Integer(190 - asc));

  PatternVector id;
  id.add(perm("1234"), 5);
  CHECK(profile_generic(Permutation::identity(5), 4) == id);
}

TEST_CASE("generic 4-profile equals brute force on all of S6") {
  for (const auto& pi : all_permutations(6)) REQUIRE(profile_generic(pi, 4) == profile_brute(pi, 4));
}

TEST_CASE("all methods agree and layers sum to binomials") {
  std::mt19937_64 rng(90);
  for (int n : {1, 2, 5, 9, 14}) {
    const Permutation pi = random_permutation(n, rng);
    const PatternVector brute = run(pi, 5, ProfileMethod::brute);
    CHECK(run(pi, 3, ProfileMethod::corner) == run(pi, 3, ProfileMethod::brute));
    CHECK(run(pi, 5, ProfileMethod::quad) == brute);
    CHECK(run(pi, 5, ProfileMethod::subquad5) == brute);
    CHECK(run(pi, 4, ProfileMethod::generic) == run(pi, 4, ProfileMethod::brute));
    CHECK(run(pi, 6, ProfileMethod::quad) == run(pi, 6, ProfileMethod::brute));
    for (int j = 1; j <= 5; ++j) {
      Integer total = 0;
      for (const auto& [tau, c] : brute.layer(j)) total += c;
      CHECK(total == binomial(n, j));
    }
  }
}

TEST_CASE("the size k-1 layer of a k-profile matches the (k-1)-profile") {
  const Permutation pi = random_perm(15, 3);
  CHECK(run(pi, 6, ProfileMethod::quad).layer(5) == run(pi, 5, ProfileMethod::subquad5).layer(5));
}

TEST_CASE("small permutations give zero upper layers") {
  const PatternVector p = run(perm("21"), 5, ProfileMethod::subquad5);
  CHECK(p.layer(3).empty());
  CHECK(p.layer(5).empty());
  CHECK(p.get(perm("21")) == Integer(1));
}

TEST_CASE("results do not depend on the thread count") {
  const Permutation pi = random_perm(30, 8);
  const PatternVector one = run(pi, 5, ProfileMethod::quad, 1);
  CHECK(run(pi, 5, ProfileMethod::quad, 4) == one);
  CHECK(run(pi, 5, ProfileMethod::subquad5, 3) == one);
  CHECK(run(pi, 4, ProfileMethod::generic, 2) == run(pi, 4, ProfileMethod::generic, 1));
}

TEST_CASE("generic cost guard") {
  GenericOptions opts;
  opts.max_cost = 100;
  CHECK_THROWS_AS(profile_generic(random_perm(11, 1), 3, opts), GuardError);
  CHECK_NOTHROW(profile_generic(random_perm(10, 1), 3, opts));
  CHECK_THROWS_AS(profile_generic(random_perm(5, 1), 9), GuardError);
}
