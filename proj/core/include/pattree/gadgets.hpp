#pragma once

#include <functional>
#include <vector>

#include "pattree/integer.hpp"
#include "pattree/pair_rect_tree.hpp"
#include "pattree/permutation.hpp"
#include "pattree/rect_tree.hpp"

namespace pattree {

/// Weight attached to a permutation position (1-based).
using WeightFn = std::function<Integer(int)>;

/// Per-position counts of a marked pattern: per_position[i] is the (weighted)
/// number of occurrences whose marked point is position i, for i in [1, n].
/// `tree` holds the same values as a 2-dimensional rectangle tree keyed by
/// (i, pi(i)), ready for rectangle queries.
struct MarkedCount {
  std::vector<Integer> per_position;  // index 0 unused
  RectangleTree tree{2, 1};

  [[nodiscard]] int size() const noexcept { return static_cast<int>(per_position.size()) - 1; }
  [[nodiscard]] Integer total() const;
  [[nodiscard]] Integer query(Interval x, Interval y) const { return tree.query(x, y); }
};

/// Wraps per-position values (index 0 ignored) into a MarkedCount.
MarkedCount make_marked_count(const Permutation& pi, std::vector<Integer> per_position);

/// Weighted chains of length k: for each position i, the sum over monotone
/// chains i_1 < ... < i_k = i (increasing values when ascending, decreasing
/// when descending) of w_1(i_1) * ... * w_k(i_k). `weights` has k entries.
MarkedCount monotone_marked_count(int k, Direction dir, const Permutation& pi, const std::vector<WeightFn>& weights);

struct Breakdown3214 {
  Integer case_a;  // first three points below and left of the marked point's grid cell
  Integer case_b;  // ... below the cell row, some in the marked point's column strip
  Integer case_c;  // ... left of the cell column, some in the marked point's row strip
  Integer case_d;  // "3" in the row strip and "1" in the column strip
};

/// Weighted occurrences of 3214 with the "4" marked: for each position i the
/// sum over occurrences (i1, i2, i3, i) of w1(i1) w2(i2) w3(i3) w4(i).
/// Runs in O~(n^{5/3}) with grid cell size m (default max(1, floor(n^{1/3}))).
/// Throws UsageError if m is outside [1, n].
MarkedCount weighted_marked_3214(const Permutation& pi, const std::vector<WeightFn>& weights, int m = 0,
                                 Breakdown3214* breakdown = nullptr);

struct Breakdown43215 {
  Integer case_a;
  Integer case_b;
  Integer case_c;
  Integer case_d;
};

/// Occurrences of 43215 with the "5" marked, counted per position of the "5".
/// Grid cell size m and pair-rectangle-tree strip size q default to
/// max(1, floor(n^{1/4})); both must lie in [1, n].
MarkedCount marked_43215(const Permutation& pi, int m = 0, int q = 0, Breakdown43215* breakdown = nullptr);

/// Default cell sizes used above.
int default_3214_cell(int n);
int default_43215_cell(int n);

}  // namespace pattree
