#pragma once

#include "pattree/permutation.hpp"

namespace pattree {

/// S_4: each point sits in its own quadrant of the 4x4 square (positions 1-2
/// versus 3-4, values 1-2 versus 3-4). DataError unless tau has size 4.
bool is_nontrivial_s4(const Permutation& tau);

/// S_8: every quadrant of the 8x8 square holds exactly two points, the number
/// of ascending pairs among the four within-quadrant pairs is odd, and the
/// left, right, bottom and top halves (four points each, standardized) are
/// non-trivial in S_4. DataError unless tau has size 8.
bool is_nontrivial_s8(const Permutation& tau);

/// Exchanges the values at positions 1 and 2.
Permutation swap_first_two(const Permutation& tau);
/// Exchanges the block of positions 1-2 with the block 3-4.
Permutation swap_first_pairs(const Permutation& tau);

/// The kernel of the corner-tree vectors restricted to S_4, as a primitive
/// integer vector whose first support pattern (lexicographically) has a
/// positive coefficient. IntegrityError if the kernel is not a line.
PatternVector kernel_s4();

}  // namespace pattree
