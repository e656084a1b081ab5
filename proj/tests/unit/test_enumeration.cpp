#include <random>
#include <set>

#include "doctest.h"
#include "pattree/enumeration.hpp"
#include "pattree/errors.hpp"
#include "pattree/tree_vector.hpp"
#include "test_support.hpp"

using namespace pattree;

namespace {

SparseRow top_layer(const PatternVector& v, int k) {
  SparseRow row;
  for (const auto& [tau, c] : v) {
    if (tau.size() == k) row.emplace_back(static_cast<int>(lex_rank(tau.values())), c.to_int64());
  }
  std::sort(row.begin(), row.end());
  return row;
}

}  // namespace

TEST_CASE("template counts: vertex-sized trees up to isomorphism") {
  // Sizes 1 only: the unlabeled trees on k vertices (1, 1, 1, 2, 3, 6, 11).
  const int unlabeled[] = {1, 1, 1, 2, 3, 6, 11};
  for (int k = 1; k <= 7; ++k) CHECK(enumerate_templates(1, k).size() == static_cast<size_t>(unlabeled[k - 1]));
  // k = 4 with sizes <= 2 adds {2,1,1} paths (middle or end), {2,2}, and the
  // two size-1 trees: 5 in total.
  CHECK(enumerate_templates(2, 4).size() == 5);
  for (const auto& t : enumerate_templates(2, 6)) {
    CHECK(t.points() == 6);
    CHECK(t.max_size() <= 2);
    CHECK(t.parent[0] == -1);
  }
}

TEST_CASE("constrained pairs cover same-vertex and adjacent-vertex points") {
  const TreeTemplate t{{2, 1, 1}, {-1, 0, 1}};  // points {0,1} - {2} - {3}
  const std::vector<std::pair<int, int>> expected{{0, 1}, {0, 2}, {1, 2}, {2, 3}};
  CHECK(t.constrained_pairs() == expected);
}

TEST_CASE("induced rows equal the top layer of the induced tree's vector") {
  std::mt19937_64 rng(12);
  for (int k = 2; k <= 6; ++k) {
    const auto templates = enumerate_templates(2, k);
    for (int trial = 0; trial < 25; ++trial) {
      const auto& t = templates[uniform_below(rng, templates.size())];
      const auto [x, y] = random_ranks(k, rng);
      const PatternTree tree = induced_tree(t, x, y);
      CAPTURE(tree.to_text());
      CHECK(induced_top_row(t, x, y) == top_layer(vector_of_tree(tree), k));
    }
  }
}

TEST_CASE("every enumerated row is consistent with occurrence counting") {
  std::mt19937_64 rng(13);
  const auto rows = enumerate_vectors(2, 4);
  std::set<SparseRow> distinct;
  for (const auto& r : rows) {
    distinct.insert(r.entries);
    CHECK(r.entries == top_layer(vector_of_tree(r.tree), 4));
    const Permutation pi = random_permutation(6, rng);
    CHECK(vector_of_tree(r.tree).evaluate_brute(pi) == tree_occurrences_brute(r.tree, pi));
  }
  CHECK(distinct.size() == rows.size());
}

TEST_CASE("streamed rows match the materialized family") {
  for (const auto& t : enumerate_templates(1, 4)) {
    std::set<SparseRow> streamed;
    for_each_induced_row(t, [&](const SparseRow& row, const Ranks& x, const Ranks& y) {
      streamed.insert(row);
      CHECK(row == induced_top_row(t, x, y));
      return true;
    });
    CHECK_FALSE(streamed.empty());
  }
}

TEST_CASE("rank table for k <= 6") {
  const int corner[] = {1, 2, 6, 23, 100, 463};
  const int quad[] = {1, 2, 6, 24, 120, 720};
  for (int k = 1; k <= 6; ++k) {
    CAPTURE(k);
    const auto r1 = family_rank(1, k);
    CHECK(r1.rank == corner[k - 1]);
    CHECK(r1.certified);
    CHECK(r1.kernel.size() == factorial(k) - static_cast<std::uint64_t>(r1.rank));
    const auto r2 = family_rank(2, k);
    CHECK(r2.rank == quad[k - 1]);
    CHECK(r2.certified);
  }
}

TEST_CASE("enumeration guards") {
  CHECK_THROWS_AS(enumerate_vectors(3, 4), GuardError);
  CHECK_THROWS_AS(enumerate_vectors(2, 8), GuardError);
  CHECK_THROWS_AS(enumerate_vectors(2, 7), GuardError);
  CHECK_THROWS_AS(family_rank(1, 7), GuardError);
  CHECK(enumerate_templates(0, 3).empty());
}
