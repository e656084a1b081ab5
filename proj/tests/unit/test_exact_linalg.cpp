#include <random>

#include "doctest.h"
#include "pattree/errors.hpp"
#include "pattree/exact_linalg.hpp"
#include "pattree/permutation.hpp"

using namespace pattree;

namespace {

IntegerMatrix from_ints(const std::vector<std::vector<long long>>& rows) {
  IntegerMatrix m;
  for (const auto& r : rows) {
    std::vector<Integer> row;
    for (long long v : r) row.emplace_back(v);
    m.push_back(std::move(row));
  }
  return m;
}

Integer dot(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  Integer s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("rank of trivial matrices") {
  CHECK(bareiss_rank({}) == 0);
  CHECK(bareiss_rank(from_ints({{0, 0, 0}, {0, 0, 0}})) == 0);
  IntegerMatrix id(6, std::vector<Integer>(6));
  for (int i = 0; i < 6; ++i) id[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  CHECK(bareiss_rank(id) == 6);
  CHECK(bareiss_determinant(id) == Integer(1));
}

TEST_CASE("determinants by cofactor expansion") {
  CHECK(bareiss_determinant(from_ints({{2, 1}, {7, 4}})) == Integer(1));
  CHECK(bareiss_determinant(from_ints({{0, 1}, {1, 0}})) == Integer(-1));
  // 3x3: 1*(5*9-6*8) - 2*(4*9-6*7) + 3*(4*8-5*7) = -3 + 12 - 9 = 0
  CHECK(bareiss_determinant(from_ints({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}})) == Integer(0));
  CHECK(bareiss_determinant(from_ints({{2, 0, 1}, {1, 3, 2}, {1, 1, 1}})) == Integer(2 * (3 - 2) - 0 + 1 * (1 - 3)));
  CHECK_THROWS_AS(bareiss_determinant(from_ints({{1, 2}})), DataError);
  CHECK_THROWS_AS(bareiss_rank(from_ints({{1, 2}, {1}})), DataError);
}

TEST_CASE("rational nullspace is primitive and annihilates the rows") {
  const IntegerMatrix m = from_ints({{1, 2, 3}, {2, 4, 6}});
  const auto k = rational_nullspace(m);
  REQUIRE(k.size() == 2);
  for (const auto& v : k) {
    for (const auto& row : m) CHECK(dot(row, v).is_zero());
  }
  const auto line = rational_nullspace(from_ints({{2, 4}}));
  REQUIRE(line.size() == 1);
  CHECK(line[0] == std::vector<Integer>{Integer(-2), Integer(1)});
}

TEST_CASE("primitive scaling clears denominators and common factors") {
  const auto v = primitive({mpq_class(1, 2), mpq_class(-3, 4), mpq_class(0)});
  CHECK(v == std::vector<Integer>{Integer(2), Integer(-3), Integer(0)});
}

TEST_CASE("chinese remaindering is symmetric") {
  const std::vector<std::uint32_t> ps{7, 11, 13};
  for (long long x : {0LL, 5LL, -5LL, 500LL, -500LL}) {
    std::vector<std::uint32_t> rs;
    for (auto p : ps) rs.push_back(static_cast<std::uint32_t>(((x % p) + p) % p));
    CHECK(crt(rs, ps) == mpz_class(static_cast<long>(x)));
  }
  CHECK_THROWS_AS(crt({1}, {7, 11}), DataError);
}

TEST_CASE("rational reconstruction recovers small fractions") {
  const mpz_class m = mpz_class(1000003) * 1000033;
  for (const auto& q : {mpq_class(3, 7), mpq_class(-22, 9), mpq_class(5)}) {
    mpz_class inv;
    mpz_class den = q.get_den();
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
    mpz_class a = (q.get_num() * inv) % m;
    if (a < 0) a += m;
    const auto r = rational_reconstruction(a, m);
    REQUIRE(r.has_value());
    CHECK(*r == q);
  }
}

TEST_CASE("lifting solves exactly and rejects non-integral or negative solutions") {
  std::mt19937_64 rng(41);
  const int n = 12;
  std::vector<SparseRow> rows;
  ModularEchelon f(n, 101, true);  // small prime: several lifting steps
  while (!f.full()) {
    SparseRow r;
    for (int c = 0; c < n; ++c) {
      const auto v = static_cast<std::int64_t>(uniform_below(rng, 7)) - 2;
      if (v != 0 && uniform_below(rng, 3) == 0) r.emplace_back(c, v);
    }
    if (f.insert(r)) rows.push_back(r);
  }
  const auto apply = [&](const std::vector<Integer>& x) {
    std::vector<Integer> b;
    for (const auto& r : rows) {
      Integer s = 0;
      for (const auto& [c, v] : r) s += Integer(static_cast<long long>(v)) * x[static_cast<size_t>(c)];
      b.push_back(s);
    }
    return b;
  };
  std::vector<Integer> x;
  for (int i = 0; i < n; ++i) x.emplace_back(static_cast<long long>(uniform_below(rng, 1000000)));
  const auto got = lift_solve(rows, f, apply(x), Integer(1000000));
  REQUIRE(got.has_value());
  CHECK(*got == x);

  auto negative = x;
  negative[3] = Integer(-4);
  CHECK_FALSE(lift_solve(rows, f, apply(negative), Integer(1000000)).has_value());

  auto doubled = apply(x);
  for (auto& v : doubled) v = v * Integer(2) + Integer(1);  // odd right-hand side
  // 2x + e solves only if rows * e has all entries 1; not the case for a random basis.
  const auto odd = lift_solve(rows, f, doubled, Integer(4000000));
  if (odd) CHECK(apply(*odd) == doubled);
}

TEST_CASE("lifting rejects a half-integral solution") {
  ModularEchelon f(1, 101, true);
  REQUIRE(f.insert({{0, 2}}));
  const std::vector<SparseRow> rows{{{0, 2}}};
  CHECK_FALSE(lift_solve(rows, f, {Integer(3)}, Integer(1000)).has_value());
  const auto ok = lift_solve(rows, f, {Integer(8)}, Integer(1000));
  REQUIRE(ok.has_value());
  CHECK((*ok)[0] == Integer(4));
  // Lifting stops at the first power of p above the bound: 10^6 needs three
  // base-101 digits, but 101^2 already exceeds 1000.
  CHECK_FALSE(lift_solve(rows, f, {Integer(2000000)}, Integer(1000)).has_value());
}
