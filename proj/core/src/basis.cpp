#include "pattree/basis.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>

#include "pattree/enumeration.hpp"
#include "pattree/errors.hpp"
#include "pattree/evaluator.hpp"
#include "pattree/exact_linalg.hpp"
#include "pattree/parallel.hpp"
#include "pattree/tree_vector.hpp"

namespace pattree {

std::string_view basis_method_name(BasisMethod m) {
  switch (m) {
    case BasisMethod::corner: return "corner";
    case BasisMethod::quad: return "quad";
    case BasisMethod::subquad5: return "subquad5";
    case BasisMethod::generic: return "generic";
  }
  return "?";
}

BasisMethod parse_basis_method(std::string_view name) {
  if (name == "corner" || name == "corner-k3") return BasisMethod::corner;
  if (name == "quad" || name == "quad-k7") return BasisMethod::quad;
  if (name == "subquad5" || name == "subquad-5") return BasisMethod::subquad5;
  if (name == "generic") return BasisMethod::generic;
  throw UsageError("unknown basis method '" + std::string(name) + "'");
}

int basis_method_max_k(BasisMethod m) {
  switch (m) {
    case BasisMethod::corner: return 3;
    case BasisMethod::quad: return 7;
    case BasisMethod::subquad5: return 5;
    case BasisMethod::generic: return 8;
  }
  return 0;
}

std::string basis_tag(BasisMethod m, int k) {
  if (m == BasisMethod::subquad5) return "subquad-" + std::to_string(k);
  return std::string(basis_method_name(m)) + "-k" + std::to_string(k);
}

std::uint64_t layer_offset(int j) {
  std::uint64_t off = 0;
  for (int r = 1; r < j; ++r) off += factorial(r);
  return off;
}

std::uint64_t pattern_column(const Permutation& tau) { return layer_offset(tau.size()) + lex_rank(tau.values()); }

int BasisArtifact::max_vertex_size() const {
  int best = 1;
  for (const auto& r : rows) {
    for (const auto& v : r.tree.vertices()) {
      if (!v.is_gadget()) best = std::max(best, v.size());
    }
  }
  return best;
}

PatternTree split_tree(const Permutation& tau) {
  const int k = tau.size();
  const int a = (k + 1) / 2;
  const auto vals = tau.values();
  PatternTree t;
  t.add_vertex("a", Permutation::standardize(vals.subspan(0, static_cast<size_t>(a))));
  if (a == k) return t;
  t.add_vertex("b", Permutation::standardize(vals.subspan(static_cast<size_t>(a))));
  std::vector<EdgeConstraint> cs;
  for (int i = 1; i <= a; ++i) {
    for (int l = 1; l <= k - a; ++l) {
      const PointRef pa{0, i};
      const PointRef pb{1, l};
      cs.push_back(EdgeConstraint::less_than(Axis::x, pa, pb));
      cs.push_back(tau(i) < tau(a + l) ? EdgeConstraint::less_than(Axis::y, pa, pb)
                                       : EdgeConstraint::less_than(Axis::y, pb, pa));
    }
  }
  t.add_edge(0, 1, std::move(cs));
  return t;
}

namespace {

// A candidate row: the tree, its orientation, and its full vector.
struct Candidate {
  PatternTree tree;
  D4 g = D4::identity;
  PatternVector vec;
};

int effective_layer(const PatternTree& t) { return constraints_of(t).class_count; }

PatternVector row_vector(const PatternTree& t, D4 g) {
  const PatternVector v = vector_of_tree(t);
  return g == D4::identity ? v : v.transformed(d4_inverse(g));
}

SparseRow top_block(const PatternVector& v, int j) {
  SparseRow row;
  for (const auto& [tau, c] : v) {
    if (tau.size() != j) continue;
    if (!c.fits_int64()) throw IntegrityError("tree vector coefficient exceeds 64 bits");
    row.emplace_back(static_cast<int>(lex_rank(tau.values())), c.to_int64());
  }
  std::sort(row.begin(), row.end());
  return row;
}

SparseRow full_row(const PatternVector& v, int k) {
  SparseRow row;
  for (const auto& [tau, c] : v) {
    if (tau.size() > k) throw IntegrityError("tree vector reaches beyond the basis size");
    row.emplace_back(static_cast<int>(pattern_column(tau)), c.to_int64());
  }
  std::sort(row.begin(), row.end());
  return row;
}

// Greedy selection state for one layer.
struct LayerSelector {
  int j;
  ModularEchelon echelon;
  std::set<SparseRow> seen;
  std::vector<BasisRow> rows;

  LayerSelector(int layer, std::uint32_t p)
      : j(layer), echelon(static_cast<int>(factorial(layer)), p, true) {}

  bool full() const { return echelon.full(); }
  // Returns true when the row was taken.
  bool offer(const SparseRow& top, const std::function<BasisRow()>& make) {
    if (full() || !seen.insert(top).second) return false;
    if (!echelon.insert(top)) return false;
    rows.push_back(make());
    return true;
  }
};

void select_family_rows(LayerSelector& sel, int s) {
  const int j = sel.j;
  const auto templates = enumerate_templates(s, j);
  const auto visit_all = [&] {
    for (const auto& t : templates) {
      for_each_induced_row(t, [&](const SparseRow& row, const Ranks& x, const Ranks& y) {
        sel.offer(row, [&] { return BasisRow{induced_tree(t, x, y), D4::identity, j}; });
        return !sel.full();
      });
      if (sel.full()) return;
    }
  };
  if (s == 1 || j <= 3) {
    visit_all();
    return;
  }
  const auto pool = sampling_pool(templates);
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(j));
  const std::uint64_t budget = 6ULL * factorial(j) + 2000;
  for (std::uint64_t attempt = 0; attempt < budget && !sel.full(); ++attempt) {
    const auto& t = pool[uniform_below(rng, pool.size())];
    const auto [x, y] = random_ranks(j, rng);
    sel.offer(induced_top_row(t, x, y), [&] { return BasisRow{induced_tree(t, x, y), D4::identity, j}; });
  }
  if (!sel.full()) visit_all();
}

int add_gadget(PatternTree& t, const std::string& name, const Permutation& label) {
  return t.add_gadget_vertex(name, label, label.size());
}

// Trees with one canonical gadget vertex, in the shapes the gadget-aware
// evaluator handles: alone, below a corner vertex on its marked point, or
// with an equality child (optionally carrying a corner child).
std::vector<PatternTree> gadget_shapes() {
  const Permutation c4 = parse_pattern("3214");
  const Permutation c5 = parse_pattern("43215");
  const std::array<Corner, 4> corners = {Corner::NE, Corner::NW, Corner::SE, Corner::SW};
  std::vector<PatternTree> out;
  {
    PatternTree t;
    add_gadget(t, "u", c4);
    out.push_back(t);
  }
  for (Corner c : corners) {
    PatternTree t;
    t.add_vertex("a", Permutation());
    const int u = add_gadget(t, "u", c4);
    std::vector<EdgeConstraint> cs;
    for (auto e : corner_constraints(c, 0, u)) {
      if (e.left.vertex == u) e.left.index = 4;
      if (e.right.vertex == u) e.right.index = 4;
      cs.push_back(e);
    }
    t.add_edge(0, u, cs);
    out.push_back(t);
  }
  for (int slot = 1; slot <= 4; ++slot) {
    PatternTree bare;
    const int u = add_gadget(bare, "u", c4);
    const int v = bare.add_vertex("v", Permutation());
    bare.add_edge(u, v, {EdgeConstraint::equal({u, slot}, {v, 1})});
    out.push_back(bare);
    for (Corner c : corners) {
      PatternTree t = bare;
      const int w = t.add_vertex("w", Permutation());
      t.add_edge(v, w, corner_constraints(c, v, w));
      out.push_back(t);
    }
  }
  {
    PatternTree t;
    add_gadget(t, "u", c5);
    out.push_back(t);
  }
  return out;
}

std::vector<Candidate> gadget_candidates(int j) {
  std::vector<std::pair<std::string, Candidate>> keyed;
  for (const auto& t : gadget_shapes()) {
    if (effective_layer(t) != j) continue;
    for (D4 g : kAllD4) {
      keyed.emplace_back(t.to_text() + "@" + std::string(d4_name(g)), Candidate{t, g, row_vector(t, g)});
    }
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Candidate> out;
  for (auto& kc : keyed) out.push_back(std::move(kc.second));
  return out;
}

void select_generic_rows(LayerSelector& sel) {
  for (const auto& tau : all_permutations(sel.j)) {
    const SparseRow top{{static_cast<int>(lex_rank(tau.values())), 1}};
    sel.offer(top, [&] { return BasisRow{split_tree(tau), D4::identity, sel.j}; });
  }
}

}  // namespace

BasisArtifact build_profile_basis(int k, BasisMethod method, const BasisOptions& options) {
  if (k < 1 || k > basis_method_max_k(method)) {
    throw UsageError(std::string(basis_method_name(method)) + " basis supports 1 <= k <= " +
                     std::to_string(basis_method_max_k(method)));
  }
  if (method == BasisMethod::quad && k == 7 && !options.long_run) {
    throw GuardError("the quad-k7 basis is a long-running build; pass the long-run flag");
  }
  const auto report = [&](const std::string& msg) {
    if (options.progress) options.progress(msg);
  };
  BasisArtifact a;
  a.k = k;
  a.method = method;
  for (int j = 1; j <= k; ++j) {
    LayerSelector sel(j, a.prime);
    switch (method) {
      case BasisMethod::corner: select_family_rows(sel, 1); break;
      case BasisMethod::quad: select_family_rows(sel, 2); break;
      case BasisMethod::generic: select_generic_rows(sel); break;
      case BasisMethod::subquad5: {
        select_family_rows(sel, 1);
        if (!sel.full()) {
          for (auto& c : gadget_candidates(j)) {
            sel.offer(top_block(c.vec, j), [&] { return BasisRow{c.tree, c.g, j}; });
            if (sel.full()) break;
          }
        }
        break;
      }
    }
    if (!sel.full()) {
      throw IntegrityError(basis_tag(method, k) + ": layer " + std::to_string(j) + " reaches rank " +
                           std::to_string(sel.echelon.rank()) + " of " + std::to_string(factorial(j)));
    }
    report("layer " + std::to_string(j) + ": selected " + std::to_string(sel.rows.size()) + " trees");
    for (auto& r : sel.rows) a.rows.push_back(std::move(r));
    a.blocks.push_back(std::move(sel.echelon));
  }
  // Full rows, including the lower layers, from each tree's vector.
  a.matrix.resize(a.rows.size());
  if (method == BasisMethod::generic) {
    // One split tree per pattern, taken in column order; its vector is the pattern.
    for (size_t i = 0; i < a.rows.size(); ++i) a.matrix[i] = {{static_cast<int>(i), 1}};
  } else {
    parallel_for(a.rows.size(), options.threads,
                 [&](size_t i) { a.matrix[i] = full_row(row_vector(a.rows[i].tree, a.rows[i].g), k); });
  }
  report("basis " + basis_tag(method, k) + ": side " + std::to_string(a.side()));
  return a;
}

PatternVector solve_profile(const BasisArtifact& a, std::span<const Integer> values, int n) {
  if (static_cast<int>(values.size()) != a.side()) throw DataError("value vector length differs from the basis side");
  if (static_cast<int>(a.blocks.size()) != a.k) throw DataError("basis artifact lacks its factorization");
  std::vector<Integer> solution(values.size());
  PatternVector out;
  for (int j = 1; j <= a.k; ++j) {
    const size_t off = layer_offset(j);
    const size_t count = factorial(j);
    std::vector<SparseRow> top(count);
    std::vector<Integer> b(count);
    for (size_t r = 0; r < count; ++r) {
      Integer rhs = values[off + r];
      for (const auto& [c, v] : a.matrix[off + r]) {
        if (static_cast<size_t>(c) < off) {
          rhs -= Integer(static_cast<long long>(v)) * solution[static_cast<size_t>(c)];
        } else {
          top[r].emplace_back(c - static_cast<int>(off), v);
        }
      }
      b[r] = std::move(rhs);
    }
    const Integer bound = n >= j ? binomial(n, j) : Integer(0);
    auto x = lift_solve(top, a.blocks[static_cast<size_t>(j - 1)], b, bound);
    if (!x) {
      throw IntegrityError("profile solve at size " + std::to_string(j) +
                           " has no integer solution in range; the basis or the tree values are inconsistent");
    }
    for (size_t c = 0; c < count; ++c) {
      if ((*x)[c] > bound) throw IntegrityError("profile solve produced a count above C(n, k)");
      solution[off + c] = (*x)[c];
      if (!(*x)[c].is_zero()) out.add(lex_unrank(j, c), (*x)[c]);
    }
  }
  return out;
}

Integer evaluate_basis_row(const BasisArtifact& a, int i, const Permutation& pi) {
  const BasisRow& r = a.rows.at(static_cast<size_t>(i));
  const EvaluateOptions opts{a.max_vertex_size()};
  const auto run = [&](const Permutation& target) {
    return r.tree.has_gadgets() ? evaluate_augmented(r.tree, target, opts) : evaluate(r.tree, target, opts);
  };
  return r.g == D4::identity ? run(pi) : run(d4_act(r.g, pi));
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------
namespace {

constexpr char kMagic[4] = {'P', 'T', 'B', 'A'};
constexpr std::uint32_t kFormatVersion = 1;

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint8_t b : bytes) h = (h ^ b) * 1099511628211ULL;
  return h;
}

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void tag(const char (&t)[5]) { out_.insert(out_.end(), t, t + 4); }
  // Sections: 4-byte tag, u64 payload length, payload.
  void section(const char (&t)[5], const Writer& body) {
    tag(t);
    u64(body.out_.size());
    out_.insert(out_.end(), body.out_.begin(), body.out_.end());
  }
  std::vector<std::uint8_t>& bytes() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  std::uint8_t u8() { return need(1)[0]; }
  std::uint32_t u32() {
    const auto* p = need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    const auto* p = need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  std::string str() {
    const std::uint32_t len = u32();
    const auto* p = need(len);
    return std::string(reinterpret_cast<const char*>(p), len);
  }
  void expect_tag(const char (&t)[5]) {
    const auto* p = need(4);
    if (std::memcmp(p, t, 4) != 0) throw DataError(std::string("basis artifact: expected section ") + t);
  }
  Reader section(const char (&t)[5]) {
    expect_tag(t);
    const std::uint64_t len = u64();
    return Reader(std::span<const std::uint8_t>(need(len), len));
  }
  bool done() const { return pos_ == in_.size(); }
  size_t position() const { return pos_; }

 private:
  const std::uint8_t* need(std::uint64_t count) {
    if (count > in_.size() - pos_) throw DataError("basis artifact is truncated");
    const auto* p = in_.data() + pos_;
    pos_ += count;
    return p;
  }
  std::span<const std::uint8_t> in_;
  size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_basis(const BasisArtifact& a) {
  Writer w;
  w.tag("PTBA");
  w.u32(kFormatVersion);
  Writer meta;
  meta.u32(static_cast<std::uint32_t>(a.k));
  meta.u8(static_cast<std::uint8_t>(a.method));
  meta.u32(a.version);
  meta.u32(a.prime);
  meta.u32(static_cast<std::uint32_t>(a.side()));
  w.section("META", meta);

  Writer trees;
  for (const auto& r : a.rows) {
    trees.u8(static_cast<std::uint8_t>(r.g));
    trees.u32(static_cast<std::uint32_t>(r.layer));
    trees.str(r.tree.to_text());
  }
  w.section("TREE", trees);

  Writer matrix;
  std::uint64_t nnz = 0;
  for (const auto& row : a.matrix) nnz += row.size();
  matrix.u64(nnz);
  for (size_t i = 0; i < a.matrix.size(); ++i) {
    for (const auto& [c, v] : a.matrix[i]) {
      matrix.u32(static_cast<std::uint32_t>(i));
      matrix.u32(static_cast<std::uint32_t>(c));
      matrix.i64(v);
    }
  }
  w.section("MTRX", matrix);

  Writer elim;
  for (const auto& e : a.blocks) {
    const size_t n = static_cast<size_t>(e.columns());
    elim.u32(static_cast<std::uint32_t>(n));
    for (int p : e.pivots()) elim.u32(static_cast<std::uint32_t>(p));
    // Upper rows are zero left of their pivot; store from the pivot on.
    for (size_t i = 0; i < n; ++i) {
      for (size_t c = static_cast<size_t>(e.pivots()[i]); c < n; ++c) elim.u32(e.upper_rows()[i * n + c]);
    }
    for (const auto& l : e.lower_rows()) {
      for (std::uint32_t v : l) elim.u32(v);
    }
  }
  w.section("ELIM", elim);

  const std::uint64_t sum = fnv1a(w.bytes());
  w.tag("CSUM");
  w.u64(sum);
  return std::move(w.bytes());
}

BasisArtifact deserialize_basis(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 20 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw DataError("not a basis artifact");
  const size_t body = bytes.size() - 12;
  {
    Reader tail(bytes.subspan(body));
    tail.expect_tag("CSUM");
    if (tail.u64() != fnv1a(bytes.subspan(0, body))) throw IntegrityError("basis artifact checksum mismatch");
  }
  Reader r(bytes.subspan(0, body));
  r.expect_tag("PTBA");
  if (r.u32() != kFormatVersion) throw DataError("unsupported basis artifact format version");
  BasisArtifact a;
  Reader meta = r.section("META");
  a.k = static_cast<int>(meta.u32());
  const std::uint8_t m = meta.u8();
  if (m > static_cast<std::uint8_t>(BasisMethod::generic)) throw DataError("unknown basis method in artifact");
  a.method = static_cast<BasisMethod>(m);
  a.version = meta.u32();
  a.prime = meta.u32();
  const std::uint32_t side = meta.u32();
  if (a.k < 1 || a.k > 8 || side != layer_offset(a.k + 1)) throw DataError("basis artifact has an inconsistent side");

  Reader trees = r.section("TREE");
  for (std::uint32_t i = 0; i < side; ++i) {
    BasisRow row;
    const std::uint8_t g = trees.u8();
    if (g >= kAllD4.size()) throw DataError("basis artifact row has an unknown symmetry");
    row.g = static_cast<D4>(g);
    row.layer = static_cast<int>(trees.u32());
    row.tree = PatternTree::parse(trees.str());
    a.rows.push_back(std::move(row));
  }

  Reader matrix = r.section("MTRX");
  a.matrix.resize(side);
  const std::uint64_t nnz = matrix.u64();
  for (std::uint64_t e = 0; e < nnz; ++e) {
    const std::uint32_t i = matrix.u32();
    const std::uint32_t c = matrix.u32();
    const std::int64_t v = matrix.i64();
    if (i >= side || c >= side) throw DataError("basis artifact matrix entry out of range");
    a.matrix[i].emplace_back(static_cast<int>(c), v);
  }

  Reader elim = r.section("ELIM");
  for (int j = 1; j <= a.k; ++j) {
    const size_t n = elim.u32();
    if (n != factorial(j)) throw DataError("basis artifact block has the wrong size");
    std::vector<int> pivots(n);
    for (auto& p : pivots) {
      p = static_cast<int>(elim.u32());
      if (p < 0 || static_cast<size_t>(p) >= n) throw DataError("basis artifact pivot out of range");
    }
    std::vector<std::uint32_t> upper(n * n, 0);
    for (size_t i = 0; i < n; ++i) {
      for (size_t c = static_cast<size_t>(pivots[i]); c < n; ++c) upper[i * n + c] = elim.u32();
    }
    std::vector<std::vector<std::uint32_t>> lower(n);
    for (size_t i = 0; i < n; ++i) {
      lower[i].resize(i + 1);
      for (auto& v : lower[i]) v = elim.u32();
    }
    a.blocks.push_back(ModularEchelon::from_parts(static_cast<int>(n), a.prime, std::move(pivots), std::move(upper),
                                                  std::move(lower)));
  }
  if (!r.done()) throw DataError("basis artifact has trailing data");
  return a;
}

void save_basis(const BasisArtifact& a, const std::filesystem::path& file) {
  const auto bytes = serialize_basis(a);
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  const auto tmp = std::filesystem::path(file).concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write basis artifact " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("failed writing basis artifact " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

BasisArtifact load_basis(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot open basis artifact " + file.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_basis(bytes);
}

std::string basis_cache_name(BasisMethod m, int k) {
  return basis_tag(m, k) + ".v" + std::to_string(kBasisCodeVersion) + ".ptba";
}

const BasisArtifact& cached_basis(int k, BasisMethod method, const std::filesystem::path& dir,
                                  const BasisOptions& options) {
  static std::mutex mu;
  static std::map<std::pair<int, BasisMethod>, std::unique_ptr<BasisArtifact>> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = memo[{k, method}];
  if (slot) return *slot;
  const auto file = dir.empty() ? std::filesystem::path() : dir / basis_cache_name(method, k);
  if (!file.empty() && std::filesystem::exists(file)) {
    auto loaded = load_basis(file);
    if (loaded.k != k || loaded.method != method || loaded.version != kBasisCodeVersion) {
      throw DataError("cached basis artifact " + file.string() + " does not match its name");
    }
    slot = std::make_unique<BasisArtifact>(std::move(loaded));
    return *slot;
  }
  auto built = std::make_unique<BasisArtifact>(build_profile_basis(k, method, options));
  if (!file.empty()) save_basis(*built, file);
  slot = std::move(built);
  return *slot;
}

}  // namespace pattree
