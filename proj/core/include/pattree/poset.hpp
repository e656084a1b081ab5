#pragma once

#include <cstdint>
#include <vector>

namespace pattree {

/// Strict order relation on elements {0..size-1} (size <= 32), stored as
/// predecessor bitmasks. Relations need not be transitively closed; cyclic
/// input is allowed and simply has no linear extension.
class Poset {
 public:
  explicit Poset(int size = 0);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(pred_.size()); }
  /// Records a < b.
  void add_less(int a, int b);
  /// Direct (not closed) predecessors of b as a bitmask.
  [[nodiscard]] std::uint32_t predecessors(int b) const { return pred_[static_cast<size_t>(b)]; }

  /// Transitive closure of the recorded relations.
  [[nodiscard]] Poset closure() const;
  /// True when a < b holds in the transitive closure.
  [[nodiscard]] bool less(int a, int b) const;
  /// False iff the relation contains a cycle (no linear extension exists).
  [[nodiscard]] bool consistent() const;

  /// Every total order extending the relation, each listed from the smallest
  /// element to the largest. Empty iff inconsistent.
  [[nodiscard]] std::vector<std::vector<int>> linear_extensions() const;
  [[nodiscard]] std::uint64_t count_linear_extensions() const;

  /// Calls f(order) for each linear extension; `order` lists elements from
  /// smallest to largest and is only valid during the call.
  template <typename F>
  void for_each_linear_extension(F&& f) const {
    std::vector<int> order;
    order.reserve(pred_.size());
    extend(0U, order, f);
  }

 private:
  template <typename F>
  void extend(std::uint32_t placed, std::vector<int>& order, F& f) const {
    const int m = size();
    if (static_cast<int>(order.size()) == m) {
      f(static_cast<const std::vector<int>&>(order));
      return;
    }
    for (int e = 0; e < m; ++e) {
      const std::uint32_t bit = 1U << e;
      if ((placed & bit) != 0U || (pred_[static_cast<size_t>(e)] & ~placed) != 0U) continue;
      order.push_back(e);
      extend(placed | bit, order, f);
      order.pop_back();
    }
  }

  std::vector<std::uint32_t> pred_;
};

}  // namespace pattree
