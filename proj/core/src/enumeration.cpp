#include "pattree/enumeration.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_set>

#include "pattree/errors.hpp"
#include "pattree/exact_linalg.hpp"
#include "pattree/poset.hpp"

namespace pattree {

int TreeTemplate::points() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }

int TreeTemplate::first_point(int v) const {
  return std::accumulate(sizes.begin(), sizes.begin() + v, 0);
}

int TreeTemplate::max_size() const { return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end()); }

std::vector<std::pair<int, int>> TreeTemplate::constrained_pairs() const {
  std::vector<std::pair<int, int>> out;
  const auto span_of = [&](int v) { return std::pair<int, int>{first_point(v), first_point(v) + sizes[static_cast<size_t>(v)]}; };
  for (int v = 0; v < vertex_count(); ++v) {
    const auto [lo, hi] = span_of(v);
    for (int a = lo; a < hi; ++a) {
      for (int b = a + 1; b < hi; ++b) out.emplace_back(a, b);
    }
    const int p = parent[static_cast<size_t>(v)];
    if (p < 0) continue;
    const auto [plo, phi] = span_of(p);
    for (int a = plo; a < phi; ++a) {
      for (int b = lo; b < hi; ++b) out.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Rooted canonical code: "(" size children... ")" with children sorted.
std::string rooted_code(const std::vector<std::vector<int>>& adj, const std::vector<int>& sizes, int v, int from) {
  std::vector<std::string> kids;
  for (int w : adj[static_cast<size_t>(v)]) {
    if (w != from) kids.push_back(rooted_code(adj, sizes, w, v));
  }
  std::sort(kids.begin(), kids.end());
  std::string out = "(" + std::to_string(sizes[static_cast<size_t>(v)]);
  for (const auto& k : kids) out += k;
  return out + ")";
}

std::string unrooted_code(const TreeTemplate& t) {
  const int m = t.vertex_count();
  std::vector<std::vector<int>> adj(static_cast<size_t>(m));
  for (int v = 1; v < m; ++v) {
    adj[static_cast<size_t>(v)].push_back(t.parent[static_cast<size_t>(v)]);
    adj[static_cast<size_t>(t.parent[static_cast<size_t>(v)])].push_back(v);
  }
  std::string best;
  for (int r = 0; r < m; ++r) {
    std::string c = rooted_code(adj, t.sizes, r, -1);
    if (best.empty() || c < best) best = std::move(c);
  }
  return best;
}

void compositions(int s, int k, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (k == 0) {
    out.push_back(cur);
    return;
  }
  for (int part = 1; part <= std::min(s, k); ++part) {
    cur.push_back(part);
    compositions(s, k - part, cur, out);
    cur.pop_back();
  }
}

// Lexicographic listing of S_k with inverse and composition tables, indexed
// by lex_rank. Composition (a o b)(i) = a(b(i)).
struct GroupTables {
  int k = 0;
  std::vector<std::vector<int>> perms;  // 0-based images
  std::vector<std::uint32_t> inverse;
  std::vector<std::uint16_t> compose;  // compose[a * k! + b]
};

const GroupTables& group_tables(int k) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GroupTables>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[k];
  if (slot) return *slot;
  auto g = std::make_unique<GroupTables>();
  g->k = k;
  std::vector<int> v(static_cast<size_t>(k));
  std::iota(v.begin(), v.end(), 0);
  do {
    g->perms.push_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  const size_t f = g->perms.size();
  const auto rank0 = [&](const std::vector<int>& p) {
    std::vector<int> one(p.size());
    for (size_t i = 0; i < p.size(); ++i) one[i] = p[i] + 1;
    return static_cast<std::uint32_t>(lex_rank(one));
  };
  g->inverse.resize(f);
  std::vector<int> tmp(static_cast<size_t>(k));
  for (size_t a = 0; a < f; ++a) {
    for (int i = 0; i < k; ++i) tmp[static_cast<size_t>(g->perms[a][static_cast<size_t>(i)])] = i;
    g->inverse[a] = rank0(tmp);
  }
  g->compose.resize(f * f);
  for (size_t a = 0; a < f; ++a) {
    for (size_t b = 0; b < f; ++b) {
      for (int i = 0; i < k; ++i) tmp[static_cast<size_t>(i)] = g->perms[a][static_cast<size_t>(g->perms[b][static_cast<size_t>(i)])];
      g->compose[a * f + b] = static_cast<std::uint16_t>(rank0(tmp));
    }
  }
  slot = std::move(g);
  return *slot;
}

std::uint64_t orientation_mask(const std::vector<std::pair<int, int>>& pairs, const std::vector<int>& rank) {
  std::uint64_t mask = 0;
  for (size_t e = 0; e < pairs.size(); ++e) {
    if (rank[static_cast<size_t>(pairs[e].first)] < rank[static_cast<size_t>(pairs[e].second)]) mask |= 1ULL << e;
  }
  return mask;
}

struct RowHash {
  std::uint64_t a;
  std::uint64_t b;
  friend bool operator==(const RowHash&, const RowHash&) = default;
};
struct RowHashHasher {
  size_t operator()(const RowHash& h) const noexcept { return static_cast<size_t>(h.a ^ (h.b * 0x9E3779B97F4A7C15ULL)); }
};

RowHash hash_row(const SparseRow& row) {
  std::uint64_t a = 1469598103934665603ULL;
  std::uint64_t b = 0x84222325CBF29CE4ULL;
  for (const auto& [c, v] : row) {
    for (std::uint64_t word : {static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(v)}) {
      for (int byte = 0; byte < 8; ++byte) {
        const std::uint64_t x = (word >> (8 * byte)) & 0xFF;
        a = (a ^ x) * 1099511628211ULL;
        b = (b ^ x) * 0x100000001B3ULL + 0x9E37ULL;
      }
    }
  }
  return {a, b};
}

void check_family_guard(int s, int k, bool long_run) {
  if (s < 1 || s > 2) throw GuardError("vector enumeration supports maximum vertex size 1 or 2");
  if (k < 1 || k > 7) throw GuardError("vector enumeration supports 1 <= k <= 7");
  if (k == 7 && !long_run) throw GuardError("k = 7 enumeration is long-running; pass the long-run flag");
}

}  // namespace

std::vector<TreeTemplate> enumerate_templates(int s, int k) {
  if (s < 1 || k < 1) return {};
  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  compositions(s, k, cur, comps);
  std::set<std::string> seen;
  std::vector<TreeTemplate> out;
  for (const auto& sizes : comps) {
    const int m = static_cast<int>(sizes.size());
    std::vector<int> parent(static_cast<size_t>(m), 0);
    parent[0] = -1;
    // Recursive trees: vertex v attaches to some earlier vertex.
    while (true) {
      TreeTemplate t{sizes, parent};
      if (seen.insert(unrooted_code(t)).second) out.push_back(std::move(t));
      int v = m - 1;
      while (v >= 1 && parent[static_cast<size_t>(v)] == v - 1) {
        parent[static_cast<size_t>(v)] = 0;
        --v;
      }
      if (v < 1) break;
      ++parent[static_cast<size_t>(v)];
    }
  }
  return out;
}

PatternTree induced_tree(const TreeTemplate& t, const Ranks& x, const Ranks& y) {
  const int m = t.vertex_count();
  PatternTree tree;
  // index_in[p]: 1-based position of point p within its vertex by x rank.
  std::vector<int> index_in(static_cast<size_t>(t.points()), 0);
  for (int v = 0; v < m; ++v) {
    const int lo = t.first_point(v);
    const int r = t.sizes[static_cast<size_t>(v)];
    std::vector<int> pts(static_cast<size_t>(r));
    std::iota(pts.begin(), pts.end(), lo);
    std::sort(pts.begin(), pts.end(), [&](int a, int b) { return x[static_cast<size_t>(a)] < x[static_cast<size_t>(b)]; });
    std::vector<int> ys;
    for (int i = 0; i < r; ++i) {
      index_in[static_cast<size_t>(pts[static_cast<size_t>(i)])] = i + 1;
      ys.push_back(y[static_cast<size_t>(pts[static_cast<size_t>(i)])]);
    }
    tree.add_vertex("v" + std::to_string(v), Permutation::standardize(ys));
  }
  for (int v = 1; v < m; ++v) {
    const int p = t.parent[static_cast<size_t>(v)];
    std::vector<EdgeConstraint> cs;
    for (int a = t.first_point(p); a < t.first_point(p) + t.sizes[static_cast<size_t>(p)]; ++a) {
      for (int b = t.first_point(v); b < t.first_point(v) + t.sizes[static_cast<size_t>(v)]; ++b) {
        const PointRef pa{p, index_in[static_cast<size_t>(a)]};
        const PointRef pb{v, index_in[static_cast<size_t>(b)]};
        const bool ax = x[static_cast<size_t>(a)] < x[static_cast<size_t>(b)];
        const bool ay = y[static_cast<size_t>(a)] < y[static_cast<size_t>(b)];
        cs.push_back(ax ? EdgeConstraint::less_than(Axis::x, pa, pb) : EdgeConstraint::less_than(Axis::x, pb, pa));
        cs.push_back(ay ? EdgeConstraint::less_than(Axis::y, pa, pb) : EdgeConstraint::less_than(Axis::y, pb, pa));
      }
    }
    tree.add_edge(p, v, std::move(cs));
  }
  return tree;
}

SparseRow induced_top_row(const TreeTemplate& t, const Ranks& x, const Ranks& y) {
  const int k = t.points();
  const auto pairs = t.constrained_pairs();
  Poset px(k);
  Poset py(k);
  for (const auto& [a, b] : pairs) {
    if (x[static_cast<size_t>(a)] < x[static_cast<size_t>(b)]) {
      px.add_less(a, b);
    } else {
      px.add_less(b, a);
    }
    if (y[static_cast<size_t>(a)] < y[static_cast<size_t>(b)]) {
      py.add_less(a, b);
    } else {
      py.add_less(b, a);
    }
  }
  const auto xs = px.linear_extensions();
  const auto ys = py.linear_extensions();
  std::vector<std::vector<int>> xrank;
  xrank.reserve(xs.size());
  for (const auto& order : xs) {
    std::vector<int> r(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) r[static_cast<size_t>(order[static_cast<size_t>(i)])] = i;
    xrank.push_back(std::move(r));
  }
  std::map<int, std::int64_t> counts;
  std::vector<int> vals(static_cast<size_t>(k));
  for (const auto& yo : ys) {
    for (const auto& xr : xrank) {
      for (int i = 0; i < k; ++i) vals[static_cast<size_t>(xr[static_cast<size_t>(yo[static_cast<size_t>(i)])])] = i + 1;
      ++counts[static_cast<int>(lex_rank(vals))];
    }
  }
  return SparseRow(counts.begin(), counts.end());
}

void for_each_induced_row(const TreeTemplate& t,
                          const std::function<bool(const SparseRow&, const Ranks&, const Ranks&)>& visit) {
  const int k = t.points();
  if (k > 7) throw GuardError("induced-row enumeration supports at most 7 points");
  const auto pairs = t.constrained_pairs();
  const GroupTables& g = group_tables(k);
  const size_t f = g.perms.size();
  std::map<std::uint64_t, std::vector<std::uint32_t>> buckets;
  for (size_t a = 0; a < f; ++a) buckets[orientation_mask(pairs, g.perms[a])].push_back(static_cast<std::uint32_t>(a));
  std::vector<std::int64_t> dense(f, 0);
  std::vector<std::uint32_t> touched;
  for (const auto& [mx, bx] : buckets) {
    for (const auto& [my, by] : buckets) {
      touched.clear();
      // Pattern for x ranks sigma and y ranks tau is tau o sigma^-1.
      for (std::uint32_t s : bx) {
        const std::uint32_t si = g.inverse[s];
        for (std::uint32_t tau : by) {
          const std::uint16_t c = g.compose[static_cast<size_t>(tau) * f + si];
          if (dense[c]++ == 0) touched.push_back(c);
        }
      }
      std::sort(touched.begin(), touched.end());
      SparseRow row;
      row.reserve(touched.size());
      for (std::uint32_t c : touched) {
        row.emplace_back(static_cast<int>(c), dense[c]);
        dense[c] = 0;
      }
      if (!visit(row, g.perms[bx.front()], g.perms[by.front()])) return;
    }
  }
}

std::vector<TreeTemplate> sampling_pool(const std::vector<TreeTemplate>& templates) {
  // Trees with several size-2 vertices carry the most constraints; their
  // sparse rows reach full rank with far fewer samples.
  const auto twos = [](const TreeTemplate& t) { return static_cast<int>(std::count(t.sizes.begin(), t.sizes.end(), 2)); };
  int best = 0;
  for (const auto& t : templates) best = std::max(best, twos(t));
  const int want = std::min(best, 2);
  std::vector<TreeTemplate> out;
  for (const auto& t : templates) {
    if (twos(t) >= want) out.push_back(t);
  }
  return out;
}

std::pair<Ranks, Ranks> random_ranks(int k, std::mt19937_64& rng) {
  const Permutation a = random_permutation(k, rng);
  const Permutation b = random_permutation(k, rng);
  Ranks x(static_cast<size_t>(k));
  Ranks y(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    x[static_cast<size_t>(i)] = a(i + 1) - 1;
    y[static_cast<size_t>(i)] = b(i + 1) - 1;
  }
  return {x, y};
}

std::vector<VectorRow> enumerate_vectors(int s, int k, const EnumerationOptions& options) {
  check_family_guard(s, k, options.long_run);
  std::vector<VectorRow> out;
  std::unordered_set<RowHash, RowHashHasher> seen;
  for (const auto& t : enumerate_templates(s, k)) {
    for_each_induced_row(t, [&](const SparseRow& row, const Ranks& x, const Ranks& y) {
      if (seen.insert(hash_row(row)).second) out.push_back({induced_tree(t, x, y), row});
      return true;
    });
  }
  return out;
}

namespace {

// Streams every distinct row of the family; stops when visit returns false.
void stream_family(int s, int k, const std::function<bool(const SparseRow&)>& visit) {
  std::unordered_set<RowHash, RowHashHasher> seen;
  bool go = true;
  for (const auto& t : enumerate_templates(s, k)) {
    for_each_induced_row(t, [&](const SparseRow& row, const Ranks&, const Ranks&) {
      if (seen.insert(hash_row(row)).second) go = visit(row);
      return go;
    });
    if (!go) return;
  }
}

bool verify_kernel(int s, int k, const std::vector<std::vector<Integer>>& kernel) {
  // Column-major copy as int64 when every entry fits, for a tight inner loop.
  const size_t dim = kernel.size();
  const size_t n = kernel.empty() ? 0 : kernel.front().size();
  std::vector<std::int64_t> by_col(n * dim);
  for (size_t j = 0; j < dim; ++j) {
    for (size_t c = 0; c < n; ++c) {
      if (!kernel[j][c].fits_int64()) return false;
      by_col[c * dim + j] = kernel[j][c].to_int64();
    }
  }
  bool ok = true;
  std::vector<__int128> acc(dim);
  stream_family(s, k, [&](const SparseRow& row) {
    std::fill(acc.begin(), acc.end(), 0);
    for (const auto& [c, v] : row) {
      const std::int64_t* kc = by_col.data() + static_cast<size_t>(c) * dim;
      for (size_t j = 0; j < dim; ++j) acc[j] += static_cast<__int128>(v) * kc[j];
    }
    ok = std::all_of(acc.begin(), acc.end(), [](__int128 x) { return x == 0; });
    return ok;
  });
  return ok;
}

}  // namespace

RankResult family_rank(int s, int k, const RankOptions& options) {
  check_family_guard(s, k, options.long_run);
  const int n = static_cast<int>(factorial(k));
  RankResult result;
  result.columns = n;
  ModularEchelon echelon(n);
  std::unordered_set<RowHash, RowHashHasher> seen;
  const auto templates = enumerate_templates(s, k);

  if (s >= 2) {
    const auto pool = sampling_pool(templates);
    std::mt19937_64 rng(options.seed);
    const std::uint64_t budget = 6ULL * static_cast<std::uint64_t>(n) + 2000;
    for (std::uint64_t attempt = 0; attempt < budget && !echelon.full(); ++attempt) {
      const auto& t = pool[uniform_below(rng, pool.size())];
      const auto [x, y] = random_ranks(k, rng);
      const SparseRow row = induced_top_row(t, x, y);
      ++result.rows_examined;
      if (seen.insert(hash_row(row)).second) echelon.insert(row);
    }
  }
  if (!echelon.full()) {
    stream_family(s, k, [&](const SparseRow& row) {
      ++result.rows_examined;
      echelon.insert(row);
      return !echelon.full();
    });
  }
  result.rank = echelon.rank();
  if (echelon.full()) {
    result.certified = true;
    return result;
  }
  if (!options.certify) return result;

  // Lift the modular kernel to Q, adding primes until it verifies exactly.
  const auto primes = modular_primes(6);
  std::vector<std::uint32_t> used;
  std::vector<std::vector<std::vector<std::uint32_t>>> kernels;
  std::vector<int> pivots;
  for (std::uint32_t p : primes) {
    std::vector<std::vector<std::uint32_t>> ker;
    std::vector<int> piv;
    if (p == kDefaultPrime) {
      ker = echelon.nullspace();
      piv = echelon.pivots();
    } else {
      ModularEchelon e(n, p);
      stream_family(s, k, [&](const SparseRow& row) {
        e.insert(row);
        return true;
      });
      if (e.rank() != result.rank) continue;
      ker = e.nullspace();
      piv = e.pivots();
    }
    std::sort(piv.begin(), piv.end());
    if (!used.empty() && piv != pivots) continue;
    pivots = piv;
    used.push_back(p);
    kernels.push_back(std::move(ker));

    mpz_class modulus = 1;
    for (std::uint32_t q : used) modulus *= q;
    std::vector<std::vector<Integer>> lifted;
    bool good = true;
    for (size_t j = 0; j < kernels.front().size() && good; ++j) {
      std::vector<mpq_class> v(static_cast<size_t>(n));
      std::vector<std::uint32_t> residues(used.size());
      for (size_t c = 0; c < static_cast<size_t>(n) && good; ++c) {
        for (size_t u = 0; u < used.size(); ++u) residues[u] = kernels[u][j][c];
        const auto q = rational_reconstruction(crt(residues, used), modulus);
        if (!q) good = false;
        else v[c] = *q;
      }
      if (good) lifted.push_back(primitive(std::move(v)));
    }
    if (good && verify_kernel(s, k, lifted)) {
      result.kernel = std::move(lifted);
      result.certified = true;
      return result;
    }
  }
  return result;
}

}  // namespace pattree
