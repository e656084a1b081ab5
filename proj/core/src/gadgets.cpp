#include "pattree/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pattree/errors.hpp"

namespace pattree {
namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

// floor(n^(1/root)) computed exactly.
int integer_root(int n, int root) {
  int r = static_cast<int>(std::floor(std::pow(static_cast<double>(n), 1.0 / root)));
  const auto power = [root](long long b) {
    long long p = 1;
    for (int i = 0; i < root; ++i) p *= b;
    return p;
  };
  while (r > 0 && power(r) > n) --r;
  while (power(r + 1) <= n) ++r;
  return std::max(r, 1);
}

using Table = std::vector<Integer>;  // index 0 unused

std::vector<Table> tabulate(const std::vector<WeightFn>& weights, int n) {
  std::vector<Table> tables;
  tables.reserve(weights.size());
  for (const auto& w : weights) {
    Table t(static_cast<size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) t[static_cast<size_t>(i)] = w ? w(i) : Integer(1);
    tables.push_back(std::move(t));
  }
  return tables;
}

std::vector<Table> unit_tables(int k, int n) { return std::vector<Table>(static_cast<size_t>(k), Table(static_cast<size_t>(n) + 1, 1)); }

Interval earlier_quadrant_y(Direction dir, int value, int n) {
  return dir == Direction::ascending ? Interval{1, value - 1} : Interval{value + 1, n};
}

// Chain tree over the positions `pts` (ascending order): returns the 2D tree
// whose weight at point p is the weighted count of monotone chains of length
// tables.size() inside pts ending at p.
RectangleTree chain_tree(const std::vector<int>& pi, const std::vector<int>& pts, Direction dir,
                         const std::vector<Table>& tables) {
  const int n = static_cast<int>(pi.size()) - 1;
  std::vector<Integer> value(pts.size());
  for (size_t a = 0; a < pts.size(); ++a) value[a] = tables[0][static_cast<size_t>(pts[a])];
  for (size_t level = 1;; ++level) {
    RectangleTree tree(2, n);
    for (size_t a = 0; a < pts.size(); ++a) {
      const int p[] = {pts[a], pi[static_cast<size_t>(pts[a])]};
      tree.insert(p, value[a]);
    }
    tree.freeze();
    if (level == tables.size()) return tree;
    for (size_t a = 0; a < pts.size(); ++a) {
      const int i = pts[a];
      const Integer& w = tables[level][static_cast<size_t>(i)];
      value[a] = w.is_zero() ? Integer(0)
                             : w * tree.query({1, i - 1}, earlier_quadrant_y(dir, pi[static_cast<size_t>(i)], n));
    }
  }
}

std::vector<int> values_of(const Permutation& pi) {
  std::vector<int> v(static_cast<size_t>(pi.size()) + 1, 0);
  for (int i = 1; i <= pi.size(); ++i) v[static_cast<size_t>(i)] = pi(i);
  return v;
}

// Occurrences of a descending chain of length |prefix| followed by a marked
// point above all of it, where the chain lies entirely below the marked
// point's row strip. Per marked position: `left` counts chains whose last
// point is left of the marked point's column strip, `rest` the others.
void below_strip_counts(const std::vector<int>& pi, int m, const std::vector<Table>& prefix, const Table& mark_weight,
                        std::vector<Integer>& left, std::vector<Integer>& rest) {
  const int n = static_cast<int>(pi.size()) - 1;
  std::vector<int> inv(static_cast<size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) inv[static_cast<size_t>(pi[static_cast<size_t>(i)])] = i;
  left.assign(static_cast<size_t>(n) + 1, 0);
  rest.assign(static_cast<size_t>(n) + 1, 0);
  const int strips = ceil_div(n, m);
  for (int y = 2; y <= strips; ++y) {
    const int floor_value = (y - 1) * m;
    std::vector<int> pts;
    for (int i = 1; i <= n; ++i) {
      if (pi[static_cast<size_t>(i)] <= floor_value) pts.push_back(i);
    }
    const RectangleTree tail = chain_tree(pi, pts, Direction::descending, prefix);
    for (int v = floor_value + 1; v <= std::min(y * m, n); ++v) {
      const int i = inv[static_cast<size_t>(v)];
      const Integer& w = mark_weight[static_cast<size_t>(i)];
      if (w.is_zero()) continue;
      const int x = ceil_div(i, m);
      const Integer a = tail.query({1, (x - 1) * m}, {1, floor_value});
      const Integer all = tail.query({1, i - 1}, {1, floor_value});
      left[static_cast<size_t>(i)] = w * a;
      rest[static_cast<size_t>(i)] = w * (all - a);
    }
  }
}

// Candidate (first, last) chain ends for case D: "first" in the marked point's
// row strip, "last" in its column strip, both below-left of the mark, with
// first before and above last. Calls visit(first, last) for each pair.
template <typename Visit>
void for_each_strip_pair(const std::vector<int>& pi, const std::vector<int>& inv, int m, int i, Visit&& visit) {
  const int n = static_cast<int>(pi.size()) - 1;
  const int v = pi[static_cast<size_t>(i)];
  const int x = ceil_div(i, m);
  const int y = ceil_div(v, m);
  std::vector<int> firsts;
  for (int u = (y - 1) * m + 1; u < v; ++u) {
    const int j = inv[static_cast<size_t>(u)];
    if (j < i) firsts.push_back(j);
  }
  std::vector<int> lasts;
  for (int l = (x - 1) * m + 1; l < i && l <= n; ++l) {
    if (pi[static_cast<size_t>(l)] < v) lasts.push_back(l);
  }
  for (int j : firsts) {
    for (int l : lasts) {
      if (j < l && pi[static_cast<size_t>(j)] > pi[static_cast<size_t>(l)]) visit(j, l);
    }
  }
}

void check_cell(int value, int n, const char* what) {
  if (value < 1 || value > n) {
    throw UsageError(std::string(what) + " must be in [1, " + std::to_string(n) + "], got " + std::to_string(value));
  }
}

}  // namespace

Integer MarkedCount::total() const {
  Integer sum;
  for (size_t i = 1; i < per_position.size(); ++i) sum += per_position[i];
  return sum;
}

MarkedCount make_marked_count(const Permutation& pi, std::vector<Integer> per_position) {
  const int n = pi.size();
  if (static_cast<int>(per_position.size()) != n + 1) {
    throw DataError("marked count needs " + std::to_string(n + 1) + " entries, got " +
                    std::to_string(per_position.size()));
  }
  MarkedCount out;
  out.tree = RectangleTree(2, n);
  for (int i = 1; i <= n; ++i) {
    const int p[] = {i, pi(i)};
    out.tree.insert(p, per_position[static_cast<size_t>(i)]);
  }
  out.tree.freeze();
  out.per_position = std::move(per_position);
  return out;
}

int default_3214_cell(int n) { return n < 1 ? 1 : integer_root(n, 3); }
int default_43215_cell(int n) { return n < 1 ? 1 : integer_root(n, 4); }

MarkedCount monotone_marked_count(int k, Direction dir, const Permutation& pi, const std::vector<WeightFn>& weights) {
  if (k < 1) throw UsageError("chain length must be at least 1");
  if (static_cast<int>(weights.size()) != k) {
    throw UsageError("chain of length " + std::to_string(k) + " needs " + std::to_string(k) + " weight functions");
  }
  const int n = pi.size();
  const std::vector<int> values = values_of(pi);
  std::vector<int> pts(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) pts[static_cast<size_t>(i - 1)] = i;
  const auto tables = tabulate(weights, n);
  const RectangleTree last = chain_tree(values, pts, dir, tables);
  std::vector<Integer> per(static_cast<size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) per[static_cast<size_t>(i)] = last.query({i, i}, {values[static_cast<size_t>(i)], values[static_cast<size_t>(i)]});
  return make_marked_count(pi, std::move(per));
}

MarkedCount weighted_marked_3214(const Permutation& pi, const std::vector<WeightFn>& weights, int m,
                                 Breakdown3214* breakdown) {
  if (weights.size() != 4) throw UsageError("3214 needs four weight functions");
  const int n = pi.size();
  if (m == 0) m = default_3214_cell(n);
  check_cell(m, n, "3214 cell size");
  const auto w = tabulate(weights, n);
  const std::vector<int> values = values_of(pi);
  const Permutation inverse = pi.inverse();
  const std::vector<int> inv = values_of(inverse);

  // Cases A and B on pi.
  std::vector<Integer> case_a;
  std::vector<Integer> case_b;
  below_strip_counts(values, m, {w[0], w[1], w[2]}, w[3], case_a, case_b);

  // Case C is case B on the inverse: the k-th point of an inverse occurrence
  // is original point 3214(k), and inverse position v is original pi^{-1}(v).
  std::vector<Table> u(4, Table(static_cast<size_t>(n) + 1));
  const int rho[] = {3, 2, 1, 4};
  for (int k = 0; k < 4; ++k) {
    for (int v = 1; v <= n; ++v) {
      u[static_cast<size_t>(k)][static_cast<size_t>(v)] =
          w[static_cast<size_t>(rho[k] - 1)][static_cast<size_t>(inv[static_cast<size_t>(v)])];
    }
  }
  std::vector<Integer> unused;
  std::vector<Integer> case_c_inv;
  below_strip_counts(inv, m, {u[0], u[1], u[2]}, u[3], unused, case_c_inv);

  // Case D: "3" in the row strip of the mark, "1" in its column strip.
  RectangleTree middle(2, n);
  for (int i = 1; i <= n; ++i) {
    const int p[] = {i, values[static_cast<size_t>(i)]};
    middle.insert(p, w[1][static_cast<size_t>(i)]);
  }
  middle.freeze();

  std::vector<Integer> per(static_cast<size_t>(n) + 1);
  Breakdown3214 parts;
  for (int i = 1; i <= n; ++i) {
    const Integer& c = case_c_inv[static_cast<size_t>(values[static_cast<size_t>(i)])];
    Integer d;
    const Integer& w4 = w[3][static_cast<size_t>(i)];
    if (!w4.is_zero()) {
      for_each_strip_pair(values, inv, m, i, [&](int j, int l) {
        const Integer ends = w[0][static_cast<size_t>(j)] * w[2][static_cast<size_t>(l)];
        if (ends.is_zero()) return;
        d += ends * middle.query({j + 1, l - 1}, {values[static_cast<size_t>(l)] + 1, values[static_cast<size_t>(j)] - 1});
      });
      d *= w4;
    }
    parts.case_a += case_a[static_cast<size_t>(i)];
    parts.case_b += case_b[static_cast<size_t>(i)];
    parts.case_c += c;
    parts.case_d += d;
    per[static_cast<size_t>(i)] = case_a[static_cast<size_t>(i)] + case_b[static_cast<size_t>(i)] + c + d;
  }
  if (breakdown) *breakdown = std::move(parts);
  return make_marked_count(pi, std::move(per));
}

MarkedCount marked_43215(const Permutation& pi, int m, int q, Breakdown43215* breakdown) {
  const int n = pi.size();
  if (m == 0) m = default_43215_cell(n);
  if (q == 0) q = default_43215_cell(n);
  check_cell(m, n, "43215 cell size");
  check_cell(q, n, "pair-rectangle-tree strip size");
  const std::vector<int> values = values_of(pi);
  const std::vector<int> inv = values_of(pi.inverse());
  const auto ones = unit_tables(5, n);

  std::vector<Integer> case_a;
  std::vector<Integer> case_b;
  below_strip_counts(values, m, {ones[0], ones[1], ones[2], ones[3]}, ones[4], case_a, case_b);
  // 43215 is its own inverse, so case C is case B on the inverse with no
  // relabelling of weights.
  std::vector<Integer> unused;
  std::vector<Integer> case_c_inv;
  below_strip_counts(inv, m, {ones[0], ones[1], ones[2], ones[3]}, ones[4], unused, case_c_inv);

  const PairRectangleTree pairs(pi, q);
  std::vector<Integer> per(static_cast<size_t>(n) + 1);
  Breakdown43215 parts;
  for (int i = 1; i <= n; ++i) {
    const Integer& c = case_c_inv[static_cast<size_t>(values[static_cast<size_t>(i)])];
    std::int64_t d = 0;
    for_each_strip_pair(values, inv, m, i, [&](int j, int l) {
      d += pairs.query({j + 1, l - 1}, {values[static_cast<size_t>(l)] + 1, values[static_cast<size_t>(j)] - 1},
                       Direction::descending);
    });
    parts.case_a += case_a[static_cast<size_t>(i)];
    parts.case_b += case_b[static_cast<size_t>(i)];
    parts.case_c += c;
    parts.case_d += Integer(d);
    per[static_cast<size_t>(i)] = case_a[static_cast<size_t>(i)] + case_b[static_cast<size_t>(i)] + c + Integer(d);
  }
  if (breakdown) *breakdown = std::move(parts);
  return make_marked_count(pi, std::move(per));
}

}  // namespace pattree
