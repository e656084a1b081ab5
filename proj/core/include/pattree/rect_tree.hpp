#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "pattree/integer.hpp"

namespace pattree {

/// Inclusive integer segment [lo, hi]; lo > hi is the empty segment.
struct Interval {
  int lo = 1;
  int hi = 0;
  [[nodiscard]] bool empty() const noexcept { return lo > hi; }
  [[nodiscard]] bool contains(int v) const noexcept { return lo <= v && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A box in [n]^d given by one segment per axis.
using Rectangle = std::vector<Interval>;

Rectangle full_rectangle(int d, int n);
bool is_empty(std::span<const Interval> r);

/// Static d-dimensional range tree over weighted points of [n]^d.
///
/// Usage is two-phase: insert() any number of points, freeze(), then query().
/// Repeated insertions at one point accumulate. Storage is a layered range
/// tree with small linear-scan buckets, so memory is O(N log^(d-1) N) in the
/// number N of distinct inserted points and a query costs O(log^d N).
/// After freeze() the tree is immutable and safe for concurrent queries.
///
/// W is the weight type: Integer for exact products of counts, or
/// std::int64_t where the caller knows sums stay small (pair counts).
template <typename W>
class BasicRectangleTree {
 public:
  /// Throws UsageError when d < 1 or n < 1.
  BasicRectangleTree(int dimension, int domain);
  ~BasicRectangleTree();
  BasicRectangleTree(BasicRectangleTree&&) noexcept;
  BasicRectangleTree& operator=(BasicRectangleTree&&) noexcept;
  BasicRectangleTree(const BasicRectangleTree&) = delete;
  BasicRectangleTree& operator=(const BasicRectangleTree&) = delete;

  [[nodiscard]] int dimension() const noexcept { return d_; }
  [[nodiscard]] int domain() const noexcept { return n_; }
  [[nodiscard]] bool frozen() const noexcept { return frozen_; }

  /// Throws DataError for out-of-domain or wrong-arity points, and
  /// std::logic_error after freeze().
  void insert(std::span<const int> point, const W& weight);
  void freeze();

  /// Sum of weights inside r. Throws DataError on dimension mismatch and
  /// std::logic_error before freeze().
  [[nodiscard]] W query(std::span<const Interval> r) const;
  /// 2-dimensional convenience overload.
  [[nodiscard]] W query(Interval x, Interval y) const {
    const Interval r[2] = {x, y};
    return query(std::span<const Interval>(r, 2));
  }
  [[nodiscard]] W total() const;
  /// Number of distinct points with non-zero weight (after freeze).
  [[nodiscard]] size_t point_count() const noexcept;

 private:
  struct Impl;
  int d_;
  int n_;
  bool frozen_ = false;
  std::vector<int> pending_coords_;
  std::vector<W> pending_weights_;
  std::unique_ptr<Impl> impl_;
};

extern template class BasicRectangleTree<Integer>;
extern template class BasicRectangleTree<std::int64_t>;

using RectangleTree = BasicRectangleTree<Integer>;
using CountRectangleTree = BasicRectangleTree<std::int64_t>;

}  // namespace pattree
