#include "pattree/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pattree/errors.hpp"
#include "pattree/gadgets.hpp"

namespace pattree {
namespace {

std::atomic<std::uint64_t> g_large_enumerations{0};
std::atomic<std::uint64_t> g_gadget_evaluations{0};

// Calls visit(xs) for each increasing position tuple whose values are
// order-isomorphic to tau.
template <typename Visit>
void for_each_occurrence(const Permutation& tau, const Permutation& pi, Visit&& visit) {
  const int r = tau.size();
  const int n = pi.size();
  std::vector<int> xs(static_cast<size_t>(r));
  const auto extend = [&](auto&& self, int depth, int from) -> void {
    if (depth == r) {
      visit(std::span<const int>(xs));
      return;
    }
    for (int i = from; i <= n - (r - depth) + 1; ++i) {
      const int v = pi(i);
      bool ok = true;
      for (int a = 0; a < depth && ok; ++a) {
        ok = (pi(xs[static_cast<size_t>(a)]) < v) == (tau(a + 1) < tau(depth + 1));
      }
      if (!ok) continue;
      xs[static_cast<size_t>(depth)] = i;
      self(self, depth + 1, i + 1);
    }
  };
  extend(extend, 0, 1);
}

// What a parent needs from a processed child: either the full occurrence
// tree (2r dimensions) or, for gadgets, a 2D tree over the marked point.
struct ChildTable {
  int size = 0;
  int mark = 0;  // non-zero for projected gadget tables
  std::unique_ptr<RectangleTree> tree;
};

Integer query_child(const ChildTable& c, const Rectangle& rect, int n) {
  if (is_empty(rect)) return 0;
  if (c.mark == 0) return c.tree->query(rect);
  const Interval full{1, n};
  for (int j = 1; j <= c.size; ++j) {
    if (j == c.mark) continue;
    if (rect[static_cast<size_t>(j - 1)] != full || rect[static_cast<size_t>(c.size + j - 1)] != full) {
      throw DataError("gadget vertex: incoming edge constrains an unmarked point");
    }
  }
  return c.tree->query(rect[static_cast<size_t>(c.mark - 1)], rect[static_cast<size_t>(c.size + c.mark - 1)]);
}

class Engine {
 public:
  Engine(const PatternTree& t, const Permutation& pi, const EvaluateOptions& options, bool augmented)
      : t_(t), pi_(pi), options_(options), augmented_(augmented), tables_(static_cast<size_t>(t.vertex_count())) {}

  Integer run() {
    t_.validate();
    for (int v = 0; v < t_.vertex_count(); ++v) {
      const auto& vx = t_.vertex(v);
      if ((!augmented_ || !vx.is_gadget()) && vx.size() > options_.max_vertex_size) {
        throw GuardError("vertex '" + vx.name + "' has size " + std::to_string(vx.size()) +
                         ", above the evaluator limit " + std::to_string(options_.max_vertex_size));
      }
    }
    Integer result;
    for (int v : t_.post_order()) {
      const bool is_root = v == t_.root();
      if (augmented_ && t_.vertex(v).is_gadget()) {
        result = gadget_vertex(v, is_root);
      } else {
        result = ordinary_vertex(v, is_root);
      }
      for (int e : t_.child_edges(v)) tables_[static_cast<size_t>(t_.edges()[static_cast<size_t>(e)].child)] = {};
    }
    return result;
  }

 private:
  Integer weight_of(int v, std::span<const int> xs, std::span<const int> ys) const {
    Integer w = 1;
    for (int e : t_.child_edges(v)) {
      const TreeEdge& edge = t_.edges()[static_cast<size_t>(e)];
      const Rectangle rect = edge_rectangle(t_, edge, xs, ys, pi_.size());
      w *= query_child(tables_[static_cast<size_t>(edge.child)], rect, pi_.size());
      if (w.is_zero()) break;
    }
    return w;
  }

  Integer ordinary_vertex(int v, bool is_root) {
    const auto& vx = t_.vertex(v);
    const int r = vx.size();
    const int n = pi_.size();
    if (r >= 2) g_large_enumerations.fetch_add(1, std::memory_order_relaxed);
    Integer total;
    std::unique_ptr<RectangleTree> tree;
    if (!is_root) tree = std::make_unique<RectangleTree>(2 * r, n);
    std::vector<int> ys(static_cast<size_t>(r));
    std::vector<int> point(static_cast<size_t>(2 * r));
    for_each_occurrence(vx.label, pi_, [&](std::span<const int> xs) {
      for (int j = 0; j < r; ++j) ys[static_cast<size_t>(j)] = pi_(xs[static_cast<size_t>(j)]);
      const Integer w = weight_of(v, xs, ys);
      if (w.is_zero()) return;
      if (is_root) {
        total += w;
        return;
      }
      std::copy(xs.begin(), xs.end(), point.begin());
      std::copy(ys.begin(), ys.end(), point.begin() + r);
      tree->insert(point, w);
    });
    if (!is_root) {
      tree->freeze();
      tables_[static_cast<size_t>(v)] = ChildTable{r, 0, std::move(tree)};
    }
    return total;
  }

  // Weight of label slot j at position a: product of the child queries whose
  // equality pins a child point to p_v^j = (a, pi(a)).
  std::vector<Integer> slot_weights(int v, int j) const {
    const int n = pi_.size();
    std::vector<Integer> out(static_cast<size_t>(n) + 1, 1);
    for (int e : t_.child_edges(v)) {
      const TreeEdge& edge = t_.edges()[static_cast<size_t>(e)];
      const EdgeConstraint& c = edge.constraints.front();
      const PointRef& mine = c.left.vertex == v ? c.left : c.right;
      const PointRef& theirs = c.left.vertex == v ? c.right : c.left;
      if (mine.index != j) continue;
      const ChildTable& child = tables_[static_cast<size_t>(edge.child)];
      const int r = t_.vertex(edge.child).size();
      Rectangle rect = full_rectangle(2 * r, n);
      for (int a = 1; a <= n; ++a) {
        rect[static_cast<size_t>(theirs.index - 1)] = {a, a};
        rect[static_cast<size_t>(r + theirs.index - 1)] = {pi_(a), pi_(a)};
        if (!out[static_cast<size_t>(a)].is_zero()) out[static_cast<size_t>(a)] *= query_child(child, rect, n);
      }
    }
    return out;
  }

  Integer gadget_vertex(int v, bool is_root) {
    g_gadget_evaluations.fetch_add(1, std::memory_order_relaxed);
    const auto& vx = t_.vertex(v);
    const int r = vx.size();
    const int n = pi_.size();
    const GadgetOrientation orient = gadget_orientation(vx.label, vx.mark);
    const D4 g = orient.g;
    // Work on pi' = g^-1 . pi, where the gadget reads as its canonical form.
    const Permutation moved = d4_act(d4_inverse(g), pi_);
    std::vector<int> back(static_cast<size_t>(n) + 1);  // pi' position -> pi position
    for (int a = 1; a <= n; ++a) back[static_cast<size_t>(a)] = d4_map_point(g, n, a, moved(a)).first;

    std::vector<Integer> per_moved;
    if (r == 4) {
      std::vector<WeightFn> weights;
      for (int k = 1; k <= r; ++k) {
        const int slot = d4_map_point(g, r, k, orient.canonical(k)).first;
        auto table = std::make_shared<std::vector<Integer>>(slot_weights(v, slot));
        auto back_ptr = std::make_shared<std::vector<int>>(back);
        weights.emplace_back([table, back_ptr](int a) { return (*table)[static_cast<size_t>((*back_ptr)[static_cast<size_t>(a)])]; });
      }
      per_moved = weighted_marked_3214(moved, weights).per_position;
    } else {
      per_moved = marked_43215(moved).per_position;
    }
    std::vector<Integer> per(static_cast<size_t>(n) + 1);
    for (int a = 1; a <= n; ++a) per[static_cast<size_t>(back[static_cast<size_t>(a)])] = std::move(per_moved[static_cast<size_t>(a)]);
    MarkedCount counted = make_marked_count(pi_, std::move(per));
    if (is_root) return counted.total();
    tables_[static_cast<size_t>(v)] =
        ChildTable{r, vx.mark, std::make_unique<RectangleTree>(std::move(counted.tree))};
    return 0;
  }

  const PatternTree& t_;
  const Permutation& pi_;
  EvaluateOptions options_;
  bool augmented_;
  std::vector<ChildTable> tables_;
};

}  // namespace

Rectangle edge_rectangle(const PatternTree& t, const TreeEdge& e, std::span<const int> parent_x,
                         std::span<const int> parent_y, int n) {
  const int r = t.vertex(e.child).size();
  Rectangle rect = full_rectangle(2 * r, n);
  const auto seg = [&](Axis axis, int index) -> Interval& {
    return rect[static_cast<size_t>((axis == Axis::x ? 0 : r) + index - 1)];
  };
  const auto coord = [&](Axis axis, int index) {
    return (axis == Axis::x ? parent_x : parent_y)[static_cast<size_t>(index - 1)];
  };
  for (const auto& c : e.constraints) {
    const bool left_is_parent = c.left.vertex == e.parent;
    const PointRef& p = left_is_parent ? c.left : c.right;
    const PointRef& q = left_is_parent ? c.right : c.left;
    if (c.kind == EdgeConstraint::Kind::equal) {
      for (Axis axis : {Axis::x, Axis::y}) {
        Interval& s = seg(axis, q.index);
        const int value = coord(axis, p.index);
        s = {std::max(s.lo, value), std::min(s.hi, value)};
      }
      continue;
    }
    Interval& s = seg(c.axis, q.index);
    const int value = coord(c.axis, p.index);
    if (left_is_parent) {
      s.lo = std::max(s.lo, value + 1);
    } else {
      s.hi = std::min(s.hi, value - 1);
    }
  }
  return rect;
}

Integer evaluate(const PatternTree& t, const Permutation& pi, const EvaluateOptions& options) {
  return Engine(t, pi, options, false).run();
}

Integer evaluate_augmented(const PatternTree& t, const Permutation& pi, const EvaluateOptions& options) {
  return Engine(t, pi, options, true).run();
}

EvaluationCounters evaluation_counters() {
  return {g_large_enumerations.load(std::memory_order_relaxed), g_gadget_evaluations.load(std::memory_order_relaxed)};
}

void reset_evaluation_counters() {
  g_large_enumerations.store(0, std::memory_order_relaxed);
  g_gadget_evaluations.store(0, std::memory_order_relaxed);
}

}  // namespace pattree
