#pragma once

#include "pattree/integer.hpp"
#include "pattree/pattern_tree.hpp"
#include "pattree/permutation.hpp"

namespace pattree {

/// Largest total size accepted by vector_of_tree.
inline constexpr int kMaxVectorPoints = 12;

/// The pattern vector of a tree: every equivalence relation coarsening the
/// tree's equalities contributes one unit to pattern tau o sigma^-1 for each
/// pair (sigma, tau) of linear extensions of its quotient x- and y-posets.
/// Gadget vertices count as ordinary vertices with the same label.
/// Throws GuardError when total_size() > kMaxVectorPoints.
PatternVector vector_of_tree(const PatternTree& t);

/// Same expansion starting from an explicit constraint system.
PatternVector vector_of_constraints(const TreeConstraints& c);

/// Number of maps from the tree's point variables to points of pi that
/// satisfy every constraint (maps need not be injective). Exhaustive search;
/// intended as a test oracle for small inputs.
Integer tree_occurrences_brute(const PatternTree& t, const Permutation& pi);

}  // namespace pattree
