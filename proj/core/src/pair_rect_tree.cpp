#include "pattree/pair_rect_tree.hpp"

#include <algorithm>

#include "pattree/errors.hpp"

namespace pattree {
namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

Interval intersect(Interval a, Interval b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

}  // namespace

PairRectangleTree::PairRectangleTree(const Permutation& pi, int q)
    : n_(pi.size()), q_(q), strips_(0), t1_(2, pi.size()), t2_(2, pi.size()) {
  if (q < 1 || q > n_) throw UsageError("pair-rectangle-tree strip size must be in [1, n]");
  strips_ = ceil_div(n_, q_);
  pi_.assign(static_cast<size_t>(n_) + 1, 0);
  inv_.assign(static_cast<size_t>(n_) + 1, 0);
  for (int i = 1; i <= n_; ++i) {
    pi_[static_cast<size_t>(i)] = pi(i);
    inv_[static_cast<size_t>(pi(i))] = i;
  }
  for (int i = 1; i <= n_; ++i) {
    const int p[] = {i, pi_[static_cast<size_t>(i)]};
    t1_.insert(p, 1);
  }
  t1_.freeze();
  for (int i = 1; i <= n_; ++i) {
    const int v = pi_[static_cast<size_t>(i)];
    const int p[] = {i, v};
    t2_.insert(p, t1_.query({1, i - 1}, {1, v - 1}));
  }
  t2_.freeze();
  vertical_.reserve(static_cast<size_t>(strips_));
  horizontal_.reserve(static_cast<size_t>(strips_));
  for (int s = 1; s <= strips_; ++s) {
    CountRectangleTree tv(2, n_);
    CountRectangleTree th(2, n_);
    for (int i = 1; i <= n_; ++i) {
      const int v = pi_[static_cast<size_t>(i)];
      const int p[] = {i, v};
      tv.insert(p, t1_.query({1, std::min(i - 1, s * q_)}, {1, v - 1}));
      th.insert(p, t1_.query({1, i - 1}, {1, std::min(v - 1, s * q_)}));
    }
    tv.freeze();
    th.freeze();
    vertical_.push_back(std::move(tv));
    horizontal_.push_back(std::move(th));
  }
}

int PairRectangleTree::vertical_strip_points(int s) const {
  if (s < 1 || s > strips_) return 0;
  return std::min(s * q_, n_) - (s - 1) * q_;
}

int PairRectangleTree::horizontal_strip_points(int s) const {
  if (s < 1 || s > strips_) return 0;
  int count = 0;
  for (int i = 1; i <= n_; ++i) count += ceil_div(pi_[static_cast<size_t>(i)], q_) == s;
  return count;
}

std::int64_t PairRectangleTree::query(Interval x, Interval y, Direction dir, Breakdown* breakdown) const {
  if (breakdown) *breakdown = Breakdown{};
  const Interval full{1, n_};
  x = intersect(x, full);
  y = intersect(y, full);
  if (x.empty() || y.empty()) return 0;

  const int a = ceil_div(x.lo, q_);
  const int b = ceil_div(x.hi, q_);
  const int c = ceil_div(y.lo, q_);
  const int d = ceil_div(y.hi, q_);

  // Margin: points of R lying in V_a, V_b, H_c or H_d.
  std::vector<int> margin;
  margin.reserve(static_cast<size_t>(4 * q_));
  const auto take_vertical = [&](int s) {
    const Interval cols = intersect(x, {(s - 1) * q_ + 1, s * q_});
    for (int i = cols.lo; i <= cols.hi; ++i) {
      if (y.contains(pi_[static_cast<size_t>(i)])) margin.push_back(i);
    }
  };
  const auto take_horizontal = [&](int s) {
    const Interval rows = intersect(y, {(s - 1) * q_ + 1, s * q_});
    for (int v = rows.lo; v <= rows.hi; ++v) {
      const int i = inv_[static_cast<size_t>(v)];
      if (x.contains(i)) margin.push_back(i);
    }
  };
  take_vertical(a);
  if (b != a) take_vertical(b);
  take_horizontal(c);
  if (d != c) take_horizontal(d);
  std::sort(margin.begin(), margin.end());
  margin.erase(std::unique(margin.begin(), margin.end()), margin.end());

  const Interval in_x{a * q_ + 1, (b - 1) * q_};
  const Interval in_y{c * q_ + 1, (d - 1) * q_};
  const bool has_interior = !in_x.empty() && !in_y.empty();

  std::int64_t end_in_margin = 0;
  std::int64_t margin_to_interior = 0;
  for (int i : margin) {
    const int v = pi_[static_cast<size_t>(i)];
    end_in_margin += t1_.query({x.lo, i - 1}, {y.lo, v - 1});
    if (has_interior) {
      margin_to_interior += t1_.query(intersect({i + 1, x.hi}, in_x), intersect({v + 1, y.hi}, in_y));
    }
  }
  std::int64_t inside = 0;
  if (has_interior) {
    inside = t2_.query(in_x, in_y) - vertical_[static_cast<size_t>(a - 1)].query(in_x, in_y) -
             horizontal_[static_cast<size_t>(c - 1)].query(in_x, in_y) +
             t1_.query(in_x, in_y) * t1_.query({1, a * q_}, {1, c * q_});
  }
  if (breakdown) *breakdown = Breakdown{end_in_margin, margin_to_interior, inside};
  const std::int64_t ascending = end_in_margin + margin_to_interior + inside;
  if (dir == Direction::ascending) return ascending;
  const std::int64_t points = t1_.query(x, y);
  return points * (points - 1) / 2 - ascending;
}

}  // namespace pattree
