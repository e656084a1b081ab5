#pragma once

#include <cstdint>
#include <vector>

#include "pattree/permutation.hpp"
#include "pattree/rect_tree.hpp"

namespace pattree {

enum class Direction : unsigned char { ascending, descending };

/// Answers "how many ascending (or descending) pairs of permutation points lie
/// in this rectangle" with O~(n^2/q) preprocessing and O~(q) queries.
///
/// Points are grouped into vertical strips V_s = {i : ceil(i/q) = s} and
/// horizontal strips H_s = {i : ceil(pi(i)/q) = s}. A query splits the pairs
/// of a rectangle into three disjoint classes: pairs ending in the margin
/// (points of the outermost strips), pairs starting in the margin and ending in
/// the interior, and pairs inside the interior; the last class is answered by
/// inclusion-exclusion over precomputed per-strip trees.
class PairRectangleTree {
 public:
  struct Breakdown {
    std::int64_t end_in_margin = 0;
    std::int64_t margin_to_interior = 0;
    std::int64_t inside_interior = 0;
  };

  /// Throws UsageError unless 1 <= q <= n.
  PairRectangleTree(const Permutation& pi, int q);

  [[nodiscard]] int size() const noexcept { return n_; }
  [[nodiscard]] int strip_size() const noexcept { return q_; }
  [[nodiscard]] int strip_count() const noexcept { return strips_; }
  /// Number of points in V_s and H_s respectively.
  [[nodiscard]] int vertical_strip_points(int s) const;
  [[nodiscard]] int horizontal_strip_points(int s) const;

  /// Pairs of points inside [x.lo, x.hi] x [y.lo, y.hi] (clipped to [1, n]).
  /// When `breakdown` is given it receives the ascending-pair class counts.
  [[nodiscard]] std::int64_t query(Interval x, Interval y, Direction dir, Breakdown* breakdown = nullptr) const;

 private:
  int n_;
  int q_;
  int strips_;
  std::vector<int> pi_;   // pi_[i] for i in [1, n]
  std::vector<int> inv_;  // inv_[v] for v in [1, n]
  CountRectangleTree t1_;
  CountRectangleTree t2_;
  std::vector<CountRectangleTree> vertical_;    // index s-1
  std::vector<CountRectangleTree> horizontal_;  // index s-1
};

}  // namespace pattree
