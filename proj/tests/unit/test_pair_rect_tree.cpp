#include <cstdint>
#include <random>

#include "doctest.h"
#include "pattree/errors.hpp"
#include "pattree/pair_rect_tree.hpp"
#include "test_support.hpp"

using namespace pattree;
using pattree::testing::perm;
using pattree::testing::random_perm;

namespace {

std::int64_t pairs_brute(const Permutation& pi, Interval x, Interval y, Direction dir) {
  std::int64_t count = 0;
  for (int i = std::max(1, x.lo); i <= std::min(pi.size(), x.hi); ++i) {
    if (!y.contains(pi(i))) continue;
    for (int j = i + 1; j <= std::min(pi.size(), x.hi); ++j) {
      if (!y.contains(pi(j))) continue;
      const bool up = pi(i) < pi(j);
      count += (up == (dir == Direction::ascending)) ? 1 : 0;
    }
  }
  return count;
}
}  // namespace

TEST_CASE("strip size guard") {
  const Permutation pi = perm("2413");
  CHECK_THROWS_AS(PairRectangleTree(pi, 0), UsageError);
  CHECK_THROWS_AS(PairRectangleTree(pi, 5), UsageError);
  CHECK_NOTHROW(PairRectangleTree(pi, 4));
}

TEST_CASE("small example") {
  // 2413 has ascending pairs (2,4), (2,3), (1,3): three of six.
  const PairRectangleTree t(perm("2413"), 1);
  CHECK(t.query({1, 4}, {1, 4}, Direction::ascending) == 3);
  CHECK(t.query({1, 4}, {1, 4}, Direction::descending) == 3);
  CHECK(t.query({2, 3}, {1, 4}, Direction::descending) == 1);
  CHECK(t.query({3, 2}, {1, 4}, Direction::ascending) == 0);
  CHECK(t.query({-5, 10}, {0, 99}, Direction::ascending) == 3);
}

TEST_CASE("strips partition the points") {
  const Permutation pi = random_perm(37, 11);
  for (int q : {1, 2, 5, 6, 37}) {
    const PairRectangleTree t(pi, q);
    int v = 0;
    int h = 0;
    for (int s = 1; s <= t.strip_count(); ++s) {
      // Strips are blocks of q consecutive columns (rows); only the last can be short.
      const int expected = s < t.strip_count() ? q : 37 - q * (t.strip_count() - 1);
      CHECK(t.vertical_strip_points(s) == expected);
      CHECK(t.horizontal_strip_points(s) == expected);
      v += t.vertical_strip_points(s);
      h += t.horizontal_strip_points(s);
    }
    CHECK(v == 37);
    CHECK(h == 37);
  }
}

TEST_CASE("random rectangles match the double loop for every strip size") {
  std::mt19937_64 rng(2024);
  for (int n : {1, 2, 7, 30, 64}) {
    const Permutation pi = random_permutation(n, rng);
    for (int q = 1; q <= n; q += (n > 10 ? 3 : 1)) {
      const PairRectangleTree t(pi, q);
      for (int trial = 0; trial < 60; ++trial) {
        const int a = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
        const int b = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
        const int c = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
        const int d = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
        const Interval x{std::min(a, b), std::max(a, b)};
        const Interval y{std::min(c, d), std::max(c, d)};
        PairRectangleTree::Breakdown parts;
        const auto asc = t.query(x, y, Direction::ascending, &parts);
        REQUIRE(asc == pairs_brute(pi, x, y, Direction::ascending));
        CHECK(parts.end_in_margin + parts.margin_to_interior + parts.inside_interior == asc);
        CHECK(parts.end_in_margin >= 0);
        CHECK(parts.margin_to_interior >= 0);
        CHECK(parts.inside_interior >= 0);
        REQUIRE(t.query(x, y, Direction::descending) == pairs_brute(pi, x, y, Direction::descending));
      }
    }
  }
}

TEST_CASE("interior class counts pairs with both ends strictly inside the strip frame") {
  const int n = 40;
  const int q = 4;
  const Permutation pi = random_perm(n, 5);
  const PairRectangleTree t(pi, q);
  // x in [3, 38] gives a = 1, b = 10: interior columns 5..36; same for rows.
  PairRectangleTree::Breakdown parts;
  (void)t.query({3, 38}, {2, 39}, Direction::ascending, &parts);
  CHECK(parts.inside_interior == pairs_brute(pi, {5, 36}, {5, 36}, Direction::ascending));
}

TEST_CASE("whole-square descending query is the inversion number") {
  const Permutation pi = random_perm(120, 8);
  std::int64_t inversions = 0;
  for (int i = 1; i <= 120; ++i) {
    for (int j = i + 1; j <= 120; ++j) inversions += pi(i) > pi(j) ? 1 : 0;
  }
  for (int q : {1, 10, 11, 120}) {
    const PairRectangleTree t(pi, q);
    CHECK(t.query({1, 120}, {1, 120}, Direction::descending) == inversions);
    CHECK(t.query({1, 120}, {1, 120}, Direction::ascending) == 120 * 119 / 2 - inversions);
  }
}
