#include "pattree/tree_vector.hpp"

#include <bit>
#include <unordered_map>

#include "pattree/errors.hpp"

namespace pattree {
namespace {

std::uint64_t pack(const std::vector<int>& values) {
  std::uint64_t key = 0;
  for (int v : values) key = (key << 4) | static_cast<std::uint64_t>(v);
  return key;
}

Permutation unpack(std::uint64_t key, int size) {
  std::vector<int> values(static_cast<size_t>(size));
  for (int i = size - 1; i >= 0; --i) {
    values[static_cast<size_t>(i)] = static_cast<int>(key & 0xF);
    key >>= 4;
  }
  return make_unchecked(std::move(values));
}

struct Expander {
  int points = 0;
  std::vector<std::uint32_t> below_x, below_y;  // closed predecessor masks
  std::vector<std::uint32_t> blocks;            // equality classes as point masks
  std::vector<std::uint32_t> conflicts;         // per block: points comparable to it
  std::unordered_map<std::uint64_t, std::int64_t> counts;

  std::vector<std::uint32_t> groups;  // current partition (point masks)

  void run() {
    for (std::uint32_t b : blocks) {
      std::uint32_t comp = 0;
      for (int p = 0; p < points; ++p) {
        if (!((b >> p) & 1U)) continue;
        comp |= below_x[static_cast<size_t>(p)] | below_y[static_cast<size_t>(p)];
        for (int q = 0; q < points; ++q) {
          if (((below_x[static_cast<size_t>(q)] | below_y[static_cast<size_t>(q)]) >> p) & 1U) comp |= 1U << q;
        }
      }
      if (comp & b) return;  // an equality forces a strict relation onto itself
      conflicts.push_back(comp);
    }
    assign(0);
  }

  void assign(size_t block) {
    if (block == blocks.size()) {
      emit();
      return;
    }
    for (size_t g = 0; g < groups.size(); ++g) {
      if (conflicts[block] & groups[g]) continue;
      groups[g] |= blocks[block];
      assign(block + 1);
      groups[g] &= ~blocks[block];
    }
    groups.push_back(blocks[block]);
    assign(block + 1);
    groups.pop_back();
  }

  // Quotient posets over the groups of the current partition.
  void emit() {
    const int q = static_cast<int>(groups.size());
    Poset px(q), py(q);
    for (int i = 0; i < q; ++i) {
      for (int j = 0; j < q; ++j) {
        if (i == j) continue;
        std::uint32_t bx = 0, by = 0;
        for (int p = 0; p < points; ++p) {
          if ((groups[static_cast<size_t>(j)] >> p) & 1U) {
            bx |= below_x[static_cast<size_t>(p)];
            by |= below_y[static_cast<size_t>(p)];
          }
        }
        if (bx & groups[static_cast<size_t>(i)]) px.add_less(i, j);
        if (by & groups[static_cast<size_t>(i)]) py.add_less(i, j);
      }
    }
    std::vector<std::vector<int>> x_orders;
    px.for_each_linear_extension([&](const std::vector<int>& order) { x_orders.push_back(order); });
    if (x_orders.empty()) return;
    std::vector<std::vector<int>> y_ranks;
    py.for_each_linear_extension([&](const std::vector<int>& order) {
      std::vector<int> rank(static_cast<size_t>(q));
      for (int r = 0; r < q; ++r) rank[static_cast<size_t>(order[static_cast<size_t>(r)])] = r + 1;
      y_ranks.push_back(std::move(rank));
    });
    std::vector<int> rho(static_cast<size_t>(q));
    for (const auto& xo : x_orders) {
      for (const auto& yr : y_ranks) {
        for (int i = 0; i < q; ++i) rho[static_cast<size_t>(i)] = yr[static_cast<size_t>(xo[static_cast<size_t>(i)])];
        ++counts[pack(rho)];
      }
    }
  }
};

}  // namespace

PatternVector vector_of_constraints(const TreeConstraints& c) {
  const int m = c.x.size();
  if (m > kMaxVectorPoints) {
    throw GuardError("vector_of_tree supports at most " + std::to_string(kMaxVectorPoints) + " points");
  }
  Expander ex;
  ex.points = m;
  const Poset cx = c.x.closure();
  const Poset cy = c.y.closure();
  for (int p = 0; p < m; ++p) {
    ex.below_x.push_back(cx.predecessors(p));
    ex.below_y.push_back(cy.predecessors(p));
  }
  ex.blocks.assign(static_cast<size_t>(c.class_count), 0U);
  for (int p = 0; p < m; ++p) ex.blocks[static_cast<size_t>(c.class_of[static_cast<size_t>(p)])] |= 1U << p;
  ex.run();
  PatternVector out;
  for (const auto& [key, count] : ex.counts) {
    // Every nibble holds a value >= 1, so the pattern size is the nibble count.
    const int size = (std::bit_width(key) + 3) / 4;
    out.add(unpack(key, size), Integer(count));
  }
  return out;
}

PatternVector vector_of_tree(const PatternTree& t) {
  t.validate();
  return vector_of_constraints(constraints_of(t));
}

namespace {

struct Occurrences {
  const Permutation* pi = nullptr;
  int points = 0;
  std::vector<std::uint32_t> less_x, less_y;  // raw predecessor masks
  std::vector<int> class_of;
  std::vector<int> pos;  // assigned x coordinate per point

  std::int64_t search(int p) {
    if (p == points) return 1;
    const int n = pi->size();
    std::int64_t total = 0;
    for (int x = 1; x <= n; ++x) {
      if (ok(p, x)) {
        pos[static_cast<size_t>(p)] = x;
        total += search(p + 1);
      }
    }
    return total;
  }

  [[nodiscard]] bool ok(int p, int x) const {
    const int y = (*pi)(x);
    for (int q = 0; q < p; ++q) {
      const int qx = pos[static_cast<size_t>(q)];
      const int qy = (*pi)(qx);
      if (class_of[static_cast<size_t>(q)] == class_of[static_cast<size_t>(p)] && qx != x) return false;
      if (((less_x[static_cast<size_t>(p)] >> q) & 1U) && !(qx < x)) return false;
      if (((less_x[static_cast<size_t>(q)] >> p) & 1U) && !(x < qx)) return false;
      if (((less_y[static_cast<size_t>(p)] >> q) & 1U) && !(qy < y)) return false;
      if (((less_y[static_cast<size_t>(q)] >> p) & 1U) && !(y < qy)) return false;
    }
    // Self-relations can only come from malformed input; they are unsatisfiable.
    if (((less_x[static_cast<size_t>(p)] >> p) & 1U) || ((less_y[static_cast<size_t>(p)] >> p) & 1U)) return false;
    return true;
  }
};

}  // namespace

Integer tree_occurrences_brute(const PatternTree& t, const Permutation& pi) {
  t.validate();
  const TreeConstraints c = constraints_of(t);
  Occurrences occ;
  occ.pi = &pi;
  occ.points = c.x.size();
  for (int p = 0; p < occ.points; ++p) {
    occ.less_x.push_back(c.x.predecessors(p));
    occ.less_y.push_back(c.y.predecessors(p));
  }
  occ.class_of = c.class_of;
  occ.pos.assign(static_cast<size_t>(occ.points), 0);
  return Integer(occ.search(0));
}

}  // namespace pattree
