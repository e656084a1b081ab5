#include "pattree/nontrivial.hpp"

#include <array>

#include "pattree/enumeration.hpp"
#include "pattree/errors.hpp"

namespace pattree {
namespace {

void require_size(const Permutation& tau, int k) {
  if (tau.size() != k) throw DataError("pattern must have size " + std::to_string(k));
}

// Quadrant index 0..3 from (low/high position, low/high value).
int quadrant(int x, int y, int half) { return (x > half ? 1 : 0) + (y > half ? 2 : 0); }

Permutation standardize_points(const std::vector<std::pair<int, int>>& pts) {
  // pts sorted by x; standardize the y values.
  std::vector<int> ys;
  ys.reserve(pts.size());
  for (const auto& p : pts) ys.push_back(p.second);
  return Permutation::standardize(ys);
}

}  // namespace

bool is_nontrivial_s4(const Permutation& tau) {
  require_size(tau, 4);
  std::array<int, 4> seen{};
  for (int i = 1; i <= 4; ++i) ++seen[static_cast<size_t>(quadrant(i, tau(i), 2))];
  return seen == std::array<int, 4>{1, 1, 1, 1};
}

bool is_nontrivial_s8(const Permutation& tau) {
  require_size(tau, 8);
  std::array<std::vector<int>, 4> in_quadrant;
  for (int i = 1; i <= 8; ++i) in_quadrant[static_cast<size_t>(quadrant(i, tau(i), 4))].push_back(i);
  int ascending = 0;
  for (const auto& q : in_quadrant) {
    if (q.size() != 2) return false;
    if (tau(q[0]) < tau(q[1])) ++ascending;
  }
  if (ascending % 2 == 0) return false;
  std::array<std::vector<std::pair<int, int>>, 4> halves;  // left, right, bottom, top
  for (int i = 1; i <= 8; ++i) {
    halves[i <= 4 ? 0 : 1].emplace_back(i, tau(i));
    halves[tau(i) <= 4 ? 2 : 3].emplace_back(i, tau(i));
  }
  for (const auto& h : halves) {
    if (!is_nontrivial_s4(standardize_points(h))) return false;
  }
  return true;
}

Permutation swap_first_two(const Permutation& tau) {
  if (tau.size() < 2) throw DataError("pattern needs at least two points");
  std::vector<int> v(tau.values().begin(), tau.values().end());
  std::swap(v[0], v[1]);
  return make_unchecked(std::move(v));
}

Permutation swap_first_pairs(const Permutation& tau) {
  if (tau.size() < 4) throw DataError("pattern needs at least four points");
  std::vector<int> v(tau.values().begin(), tau.values().end());
  std::swap(v[0], v[2]);
  std::swap(v[1], v[3]);
  return make_unchecked(std::move(v));
}

PatternVector kernel_s4() {
  const RankResult r = family_rank(1, 4);
  if (!r.certified || r.kernel.size() != 1) {
    throw IntegrityError("corner-tree kernel over S_4 is not one-dimensional");
  }
  std::vector<Integer> v = r.kernel.front();
  for (const auto& e : v) {
    if (e.is_zero()) continue;
    if (e < Integer(0)) {
      for (auto& x : v) x = -x;
    }
    break;
  }
  PatternVector out;
  for (size_t i = 0; i < v.size(); ++i) out.add(lex_unrank(4, i), v[i]);
  return out;
}

}  // namespace pattree
