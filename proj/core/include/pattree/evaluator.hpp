#pragma once

#include <cstdint>
#include <span>

#include "pattree/integer.hpp"
#include "pattree/pattern_tree.hpp"
#include "pattree/permutation.hpp"
#include "pattree/rect_tree.hpp"

namespace pattree {

struct EvaluateOptions {
  /// Largest ordinary vertex the evaluator will enumerate; larger vertices
  /// raise GuardError (enumerating a size-r vertex costs Theta(n^r)).
  int max_vertex_size = 2;
};

/// #T(pi): the number of assignments of the tree's point variables to points
/// of pi satisfying all vertex patterns and edge constraints. Vertices are
/// processed children-first; each non-root vertex stores its weighted
/// occurrences in a 2r-dimensional rectangle tree that its parent queries.
/// Gadget vertices are enumerated like ordinary ones.
Integer evaluate(const PatternTree& t, const Permutation& pi, const EvaluateOptions& options = {});

/// Same value, but gadget vertices are handled by the dedicated
/// sub-quadratic marked-pattern counters instead of enumeration.
Integer evaluate_augmented(const PatternTree& t, const Permutation& pi, const EvaluateOptions& options = {});

/// The child-side search box of an edge for one placement of the parent's
/// points: 2r segments (x of child points 1..r, then y of points 1..r), where
/// r is the child's size. Strict inequalities shrink segments, equalities pin
/// both coordinates. parent_x[j-1], parent_y[j-1] locate parent point j.
Rectangle edge_rectangle(const PatternTree& t, const TreeEdge& e, std::span<const int> parent_x,
                         std::span<const int> parent_y, int n);

/// Process-wide counters, for checking which code paths ran.
struct EvaluationCounters {
  /// Ordinary vertices of size >= 2 whose occurrences were enumerated.
  std::uint64_t large_vertex_enumerations = 0;
  /// Gadget vertices answered by a marked-pattern counter.
  std::uint64_t gadget_evaluations = 0;
};
EvaluationCounters evaluation_counters();
void reset_evaluation_counters();

}  // namespace pattree
