#include "pattree/poset.hpp"

#include <stdexcept>

namespace pattree {

Poset::Poset(int size) {
  if (size < 0 || size > 32) throw std::invalid_argument("poset size must be in [0, 32]");
  pred_.assign(static_cast<size_t>(size), 0U);
}

void Poset::add_less(int a, int b) {
  if (a < 0 || b < 0 || a >= size() || b >= size()) throw std::out_of_range("poset element out of range");
  pred_[static_cast<size_t>(b)] |= 1U << a;
}

Poset Poset::closure() const {
  Poset out = *this;
  const int m = size();
  // Warshall over predecessor masks: if k < j then everything below k is below j.
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < m; ++j) {
      if (out.pred_[static_cast<size_t>(j)] & (1U << k)) out.pred_[static_cast<size_t>(j)] |= out.pred_[static_cast<size_t>(k)];
    }
  }
  return out;
}

bool Poset::less(int a, int b) const { return (closure().pred_[static_cast<size_t>(b)] >> a) & 1U; }

bool Poset::consistent() const {
  const Poset c = closure();
  for (int e = 0; e < size(); ++e) {
    if ((c.pred_[static_cast<size_t>(e)] >> e) & 1U) return false;
  }
  return true;
}

std::vector<std::vector<int>> Poset::linear_extensions() const {
  std::vector<std::vector<int>> out;
  for_each_linear_extension([&](const std::vector<int>& order) { out.push_back(order); });
  return out;
}

std::uint64_t Poset::count_linear_extensions() const {
  // Subset DP over down-sets.
  const int m = size();
  if (m > 24) throw std::invalid_argument("count_linear_extensions supports at most 24 elements");
  std::vector<std::uint64_t> ways(size_t{1} << m, 0);
  ways[0] = 1;
  for (std::uint32_t placed = 0; placed < (1U << m); ++placed) {
    if (ways[placed] == 0) continue;
    for (int e = 0; e < m; ++e) {
      const std::uint32_t bit = 1U << e;
      if ((placed & bit) == 0U && (pred_[static_cast<size_t>(e)] & ~placed) == 0U) ways[placed | bit] += ways[placed];
    }
  }
  return ways[(size_t{1} << m) - 1];
}

}  // namespace pattree
