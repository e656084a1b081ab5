#include <cstdint>
#include <random>

#include "doctest.h"
#include "pattree/errors.hpp"
#include "pattree/exact_linalg.hpp"
#include "pattree/modular.hpp"
#include "pattree/permutation.hpp"

using namespace pattree;

namespace {

SparseRow random_row(std::mt19937_64& rng, int cols, int range, double density) {
  SparseRow row;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int c = 0; c < cols; ++c) {
    if (coin(rng) >= density) continue;
    const auto v = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(2 * range + 1))) - range;
    if (v != 0) row.emplace_back(c, v);
  }
  return row;
}

IntegerMatrix dense(const std::vector<SparseRow>& rows, int cols) {
  IntegerMatrix m(rows.size(), std::vector<Integer>(static_cast<size_t>(cols)));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [c, v] : rows[i]) m[i][static_cast<size_t>(c)] = Integer(static_cast<long long>(v));
  }
  return m;
}

std::uint32_t dot_mod(const SparseRow& row, const std::vector<std::uint32_t>& x, std::uint32_t p) {
  std::int64_t acc = 0;
  for (const auto& [c, v] : row) {
    acc = (acc + static_cast<std::int64_t>(to_residue(v, p)) * x[static_cast<size_t>(c)]) % p;
  }
  return static_cast<std::uint32_t>(acc);
}

}  // namespace

TEST_CASE("primes below 2^26") {
  const auto ps = modular_primes(4);
  REQUIRE(ps.size() == 4);
  CHECK(ps[0] == kDefaultPrime);
  for (size_t i = 0; i < ps.size(); ++i) {
    CHECK(is_prime(ps[i]));
    CHECK(ps[i] < (1U << 26));
    if (i > 0) CHECK(ps[i] < ps[i - 1]);
  }
  // Nothing between the default prime and 2^26 is prime.
  for (std::uint64_t v = kDefaultPrime + 1; v < (1U << 26); ++v) CHECK_FALSE(is_prime(v));
}

TEST_CASE("inverses and residues") {
  const std::uint32_t p = 101;
  for (std::uint32_t a = 1; a < p; ++a) CHECK(static_cast<std::uint64_t>(a) * mod_inverse(a, p) % p == 1);
  CHECK_THROWS(mod_inverse(0, p));
  CHECK(to_residue(-1, p) == 100);
  CHECK(to_residue(-202, p) == 0);
  CHECK(to_residue(205, p) == 3);
}

TEST_CASE("echelon rank agrees with exact elimination on random matrices") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const int cols = 1 + static_cast<int>(uniform_below(rng, 12));
    const int nrows = static_cast<int>(uniform_below(rng, 16));
    std::vector<SparseRow> rows;
    for (int i = 0; i < nrows; ++i) rows.push_back(random_row(rng, cols, 3, 0.35));
    // Duplicate or combine rows now and then so ranks are often deficient.
    if (nrows >= 2 && trial % 3 == 0) rows.push_back(rows[0]);
    ModularEchelon e(cols);
    for (const auto& r : rows) (void)e.insert(r);
    CHECK(e.rank() == bareiss_rank(dense(rows, cols)));
  }
}

TEST_CASE("echelon kernel vectors annihilate the inserted rows") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const int cols = 6 + static_cast<int>(uniform_below(rng, 6));
    std::vector<SparseRow> rows;
    for (int i = 0; i < cols - 2; ++i) rows.push_back(random_row(rng, cols, 5, 0.5));
    ModularEchelon e(cols);
    for (const auto& r : rows) (void)e.insert(r);
    const auto kernel = e.nullspace();
    CHECK(static_cast<int>(kernel.size()) == cols - e.rank());
    for (const auto& v : kernel) {
      for (const auto& r : rows) CHECK(dot_mod(r, v, e.prime()) == 0);
    }
  }
}

TEST_CASE("recorded factorization solves square systems") {
  std::mt19937_64 rng(33);
  const int n = 30;
  ModularEchelon e(n, kDefaultPrime, true);
  std::vector<SparseRow> rows;
  while (!e.full()) {
    SparseRow r = random_row(rng, n, 9, 0.3);
    if (e.insert(r)) rows.push_back(r);
  }
  std::vector<std::uint32_t> x(n);
  for (auto& v : x) v = static_cast<std::uint32_t>(uniform_below(rng, kDefaultPrime));
  std::vector<std::uint32_t> b(n);
  for (int i = 0; i < n; ++i) b[static_cast<size_t>(i)] = dot_mod(rows[static_cast<size_t>(i)], x, kDefaultPrime);
  CHECK(e.solve(b) == x);

  const auto copy = ModularEchelon::from_parts(n, kDefaultPrime, e.pivots(), e.upper_rows(), e.lower_rows());
  CHECK(copy.solve(b) == x);
}

TEST_CASE("echelon guards") {
  CHECK_THROWS_AS(ModularEchelon(-1), UsageError);
  CHECK_THROWS_AS(ModularEchelon(3, 1U << 26), UsageError);
  ModularEchelon e(3);
  CHECK_THROWS_AS((void)e.insert({{3, 1}}), DataError);
  CHECK_FALSE(e.insert({}));
  CHECK_FALSE(e.insert({{1, static_cast<std::int64_t>(kDefaultPrime)}}));  // zero mod p
  const std::vector<std::uint32_t> b(3, 0);
  CHECK_THROWS_AS((void)e.solve(b), std::logic_error);  // not recorded, not full
  CHECK_THROWS_AS(ModularEchelon::from_parts(2, kDefaultPrime, {0}, {1, 0, 0, 1}, {{1}, {0, 1}}), DataError);
}
