#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pattree/modular.hpp"
#include "pattree/pattern_tree.hpp"
#include "pattree/permutation.hpp"

namespace pattree {

/// Shape of a pattern-tree before constraints are chosen: vertex sizes and a
/// tree on the vertices (parent[0] = -1, vertex 0 is the root). Point
/// variables are numbered vertex by vertex: vertex v owns the points
/// first_point(v) .. first_point(v) + sizes[v] - 1.
struct TreeTemplate {
  std::vector<int> sizes;
  std::vector<int> parent;

  [[nodiscard]] int vertex_count() const noexcept { return static_cast<int>(sizes.size()); }
  [[nodiscard]] int points() const;
  [[nodiscard]] int first_point(int v) const;
  [[nodiscard]] int max_size() const;
  /// Pairs of points that share a vertex or sit on adjacent vertices; these
  /// are exactly the pairs an induced tree constrains.
  [[nodiscard]] std::vector<std::pair<int, int>> constrained_pairs() const;
};

/// Every template with vertex sizes in [1, s] and k points, one per
/// isomorphism class of vertex-sized (unrooted) trees. The vector of an
/// induced tree depends only on its constraint graph, so rooting and vertex
/// order do not matter.
std::vector<TreeTemplate> enumerate_templates(int s, int k);

/// Point ranks: rank[i] in [0, k) is the x (or y) rank of point variable i.
using Ranks = std::vector<int>;

/// The pattern-tree obtained by writing every constrained pair's x and y
/// order (taken from the ranks) onto the vertex labels and edges.
PatternTree induced_tree(const TreeTemplate& t, const Ranks& x, const Ranks& y);

/// Restriction of the induced tree's vector to S_k, columns indexed by
/// lex_rank. Equal to the sum over all rank pairs inducing the same tree.
SparseRow induced_top_row(const TreeTemplate& t, const Ranks& x, const Ranks& y);

/// Calls visit(row, x, y) once per distinct induced tree of the template
/// (one per pair of acyclic orientations of the constrained pairs), with
/// representative ranks. Rows are top-layer vectors as above. Stops early
/// when visit returns false.
void for_each_induced_row(const TreeTemplate& t,
                          const std::function<bool(const SparseRow&, const Ranks&, const Ranks&)>& visit);

/// One row of a vector matrix: the tree and its top-layer vector.
struct VectorRow {
  PatternTree tree;
  SparseRow entries;
};

struct EnumerationOptions {
  /// Allow k = 7 exhaustive enumeration (long-running).
  bool long_run = false;
};

/// All induced trees of all templates with sizes <= s and k points, rows with
/// identical vectors merged. Columns index S_k by lex_rank. GuardError when
/// s > 2, k > 7, or k = 7 without long_run.
std::vector<VectorRow> enumerate_vectors(int s, int k, const EnumerationOptions& options = {});

struct RankResult {
  int rank = 0;
  int columns = 0;
  /// True when the value is proven: full rank by a non-zero minor mod p, or
  /// deficient rank additionally by an exactly verified kernel basis.
  bool certified = false;
  std::uint64_t rows_examined = 0;
  /// Primitive integer kernel vectors when the rank is deficient and certified.
  std::vector<std::vector<Integer>> kernel;
};

struct RankOptions {
  bool long_run = false;
  std::uint64_t seed = 1;
  /// Skip exact kernel certification of deficient ranks (k = 7, s = 1).
  bool certify = true;
};

/// g(s, k): the rank over Q of the top-layer vectors of all pattern-trees with
/// maximum size <= s and k points. Sampling first (a full-rank hit ends the
/// search), then an exhaustive pass; deficient ranks are certified by lifting
/// the modular kernel to Q and verifying it against every row.
RankResult family_rank(int s, int k, const RankOptions& options = {});

/// Templates that random sampling draws from: those with the most size-2
/// vertices (capped at two), falling back to all templates.
std::vector<TreeTemplate> sampling_pool(const std::vector<TreeTemplate>& templates);

/// Random rank pair (x, y) for a template, from the seeded generator.
std::pair<Ranks, Ranks> random_ranks(int k, std::mt19937_64& rng);

}  // namespace pattree
