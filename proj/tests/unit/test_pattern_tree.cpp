#include <random>

#include "doctest.h"
#include "pattree/errors.hpp"
#include "pattree/pattern_tree.hpp"
#include "pattree/poset.hpp"
#include "pattree/tree_vector.hpp"
#include "test_support.hpp"

using namespace pattree;
using pattree::testing::perm;

namespace {

// Vertex u labelled 132 with children v (12, second point identified with
// u's second point) and w (1, strictly between u.2 and u.3 horizontally and
// below u.3). Its vector includes <1423> + <2413> + 2<12534> + <24513>.
const char* kThreeVertexTree = R"(# root u with two children
vertex u 132
vertex v 12
vertex w 1
root u
edge u v : p v.2 = p u.2
edge u w : x u.2 < x w.1, x w.1 < x u.3, y w.1 < y u.3
)";

}  // namespace

TEST_CASE("linear extensions") {
  Poset anti(3);
  CHECK(anti.linear_extensions().size() == 6);
  CHECK(anti.count_linear_extensions() == 6);
  Poset chain(3);
  chain.add_less(0, 1);
  chain.add_less(1, 2);
  CHECK(chain.linear_extensions().size() == 1);
  CHECK(chain.linear_extensions()[0] == std::vector<int>{0, 1, 2});
  Poset cyc(2);
  cyc.add_less(0, 1);
  cyc.add_less(1, 0);
  CHECK(cyc.linear_extensions().empty());
  CHECK_FALSE(cyc.consistent());
  CHECK(chain.less(0, 2));
  Poset big(7);
  CHECK(big.count_linear_extensions() == 5040);
}

TEST_CASE("constraints of a single 132 vertex") {
  PatternTree t;
  t.add_vertex("u", perm("132"));
  const auto c = constraints_of(t);
  CHECK(c.x.less(0, 1));
  CHECK(c.x.less(1, 2));
  CHECK(c.y.less(0, 2));
  CHECK(c.y.less(2, 1));
  CHECK_FALSE(c.y.less(1, 2));
  CHECK(c.class_count == 3);
}

TEST_CASE("corner sugar expands to two inequalities") {
  const PatternTree t = PatternTree::parse("vertex a 1\nvertex b 1\nedge a b : NE\n");
  const auto c = constraints_of(t);
  CHECK(c.x.less(0, 1));
  CHECK(c.y.less(0, 1));
  CHECK(vector_of_tree(t) == PatternVector::parse_text("12\t1\n"));
}

TEST_CASE("equality plus contradicting inequality is infeasible") {
  const PatternTree t = PatternTree::parse("vertex u 1\nvertex v 1\nedge u v : p u.1 = p v.1, x u.1 < x v.1\n");
  const auto c = constraints_of(t);
  CHECK(c.class_count == 1);
  CHECK(c.x.less(0, 1));
  CHECK(vector_of_tree(t).empty());
  for (const auto& pi : all_permutations(4)) CHECK(tree_occurrences_brute(t, pi).is_zero());
}

TEST_CASE("corner path SE then NE") {
  const PatternTree t = PatternTree::parse("vertex r 1\nvertex c 1\nvertex g 1\nedge r c : SE\nedge c g : NE\n");
  const PatternVector v = vector_of_tree(t);
  CHECK(v.support_size() == 2);
  CHECK(v.get(perm("213")) == Integer(1));
  CHECK(v.get(perm("312")) == Integer(1));
}

TEST_CASE("three-vertex example vector") {
  const PatternTree t = PatternTree::parse(kThreeVertexTree);
  CHECK(t.max_size() == 3);
  CHECK(t.total_size() == 6);
  const PatternVector v = vector_of_tree(t);
  CHECK(v.get(perm("1423")) == Integer(1));
  CHECK(v.get(perm("2413")) == Integer(1));
  CHECK(v.get(perm("12534")) == Integer(2));
  CHECK(v.get(perm("24513")) == Integer(1));
  const Permutation pi = perm("2471635");
  CHECK(tree_occurrences_brute(t, pi) == v.evaluate_brute(pi));
}

TEST_CASE("text format round trip") {
  const PatternTree t = PatternTree::parse(kThreeVertexTree);
  const std::string text = t.to_text();
  const PatternTree again = PatternTree::parse(text);
  CHECK(again == t);
  CHECK(again.to_text() == text);
  const PatternTree g = PatternTree::parse("vertex a 1\nvertex u gadget 3214 mark 4\nroot a\nedge a u : x a.1 < x u.4, y a.1 < y u.4\n");
  CHECK(g.vertex(1).is_gadget());
  CHECK(PatternTree::parse(g.to_text()) == g);
}

TEST_CASE("malformed documents are rejected with line numbers") {
  CHECK_THROWS_AS((void)PatternTree::parse(""), DataError);
  CHECK_THROWS_AS((void)PatternTree::parse("vertex u 132\nvertex u 1\n"), DataError);
  CHECK_THROWS_AS((void)PatternTree::parse("vertex u 132\nvertex v 1\n"), DataError);  // disconnected
  CHECK_THROWS_AS((void)PatternTree::parse("vertex u 12\nvertex v 1\nedge u v : NE\n"), DataError);
  CHECK_THROWS_AS((void)PatternTree::parse("vertex u 1\nvertex v 1\nedge u v : x u.2 < x v.1\n"), DataError);
  CHECK_THROWS_AS((void)PatternTree::parse("vertex u 1\nvertex v 1\nedge u v : x u.1 < y v.1\n"), DataError);
  CHECK_THROWS_AS((void)PatternTree::parse("vertex u 1\nfoo\n"), DataError);
  try {
    (void)PatternTree::parse("vertex u 1\nvertex v 1\nedge u w : NE\n");
    FAIL("expected error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("gadget shape checks") {
  // Incoming edge must only touch the marked point.
  CHECK_THROWS_AS((void)PatternTree::parse("vertex a 1\nvertex u gadget 3214 mark 4\nedge a u : x a.1 < x u.1\n"),
                  DataError);
  // Outgoing edges must be a single equality.
  CHECK_THROWS_AS((void)PatternTree::parse("vertex u gadget 3214 mark 4\nvertex b 1\nedge u b : x u.1 < x b.1\n"),
                  DataError);
  CHECK_NOTHROW((void)PatternTree::parse("vertex u gadget 3214 mark 4\nvertex b 1\nedge u b : p u.2 = p b.1\n"));
  // 43215 is leaf-only.
  CHECK_THROWS_AS(
      (void)PatternTree::parse("vertex u gadget 43215 mark 5\nvertex b 1\nedge u b : p u.2 = p b.1\n"), DataError);
  // Mark must follow the symmetry: 4123 is 3214 reversed, which moves the mark to index 1.
  CHECK_NOTHROW((void)PatternTree::parse("vertex u gadget 4123 mark 1\n"));
  CHECK_THROWS_AS((void)PatternTree::parse("vertex u gadget 4123 mark 4\n"), DataError);
  CHECK_THROWS_AS((void)PatternTree::parse("vertex u gadget 1234 mark 4\n"), DataError);
}

TEST_CASE("corner-tree vectors live on patterns of size at most the vertex count") {
  std::mt19937_64 rng(17);
  const Corner corners[] = {Corner::NE, Corner::NW, Corner::SE, Corner::SW};
  for (int trial = 0; trial < 40; ++trial) {
    PatternTree t;
    const int k = 1 + static_cast<int>(uniform_below(rng, 5));
    for (int v = 0; v < k; ++v) {
      t.add_vertex("c" + std::to_string(v), perm("1"));
      if (v > 0) {
        const int parent = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(v)));
        t.add_edge(parent, v, corner_constraints(corners[uniform_below(rng, 4)], parent, v));
      }
    }
    for (const auto& [tau, c] : vector_of_tree(t)) {
      CHECK(tau.size() <= k);
      CHECK(c.sign() > 0);
    }
  }
}

TEST_CASE("vector expansion matches brute-force occurrences on random trees") {
  std::mt19937_64 rng(99);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const PatternTree t = pattree::testing::random_tree(rng, 3, 6, true);
    const PatternVector v = vector_of_tree(t);
    for (const auto& [tau, c] : v) CHECK(c.sign() > 0);
    for (int s = 0; s < 3; ++s) {
      const int n = 1 + static_cast<int>(uniform_below(rng, 6));
      const Permutation pi = random_permutation(n, rng);
      REQUIRE_MESSAGE(tree_occurrences_brute(t, pi) == v.evaluate_brute(pi), t.to_text());
      ++checked;
    }
  }
  CHECK(checked == 360);
}
