#include "pattree/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>

#include "pattree/errors.hpp"

namespace pattree {

Permutation make_unchecked(std::vector<int> values) {
  return Permutation(std::move(values), Permutation::Unchecked{});
}

namespace {

void validate(const std::vector<int>& values) {
  if (values.empty()) throw DataError("empty permutation");
  const int n = static_cast<int>(values.size());
  std::vector<int> seen_at(static_cast<size_t>(n) + 1, 0);
  for (int pos = 1; pos <= n; ++pos) {
    const int v = values[static_cast<size_t>(pos - 1)];
    if (v < 1 || v > n) {
      throw DataError("out-of-range value " + std::to_string(v) + " at position " + std::to_string(pos) +
                      " (expected 1.." + std::to_string(n) + ")");
    }
    if (seen_at[static_cast<size_t>(v)] != 0) {
      throw DataError("duplicate value " + std::to_string(v) + " at position " + std::to_string(pos) +
                      " (first seen at position " + std::to_string(seen_at[static_cast<size_t>(v)]) + ")");
    }
    seen_at[static_cast<size_t>(v)] = pos;
  }
}

struct D4Matrix {
  int a, b, c, d;  // (u, v) -> (a u + b v, c u + d v) on centred coordinates
};

constexpr D4Matrix kMatrices[8] = {
    {1, 0, 0, 1},    // identity
    {0, -1, 1, 0},   // rot90
    {-1, 0, 0, -1},  // rot180
    {0, 1, -1, 0},   // rot270
    {1, 0, 0, -1},   // reflect-horizontal
    {-1, 0, 0, 1},   // reflect-vertical
    {0, 1, 1, 0},    // reflect-main-diagonal
    {0, -1, -1, 0},  // reflect-anti-diagonal
};

constexpr std::string_view kNames[8] = {
    "identity",           "rot90",           "rot180",
    "rot270",             "reflect-horizontal", "reflect-vertical",
    "reflect-main-diagonal", "reflect-anti-diagonal"};

D4 from_matrix(const D4Matrix& m) {
  for (int i = 0; i < 8; ++i) {
    const auto& k = kMatrices[i];
    if (k.a == m.a && k.b == m.b && k.c == m.c && k.d == m.d) return static_cast<D4>(i);
  }
  throw std::logic_error("matrix is not in D4");
}

}  // namespace

Permutation::Permutation(std::vector<int> values) : values_(std::move(values)) { validate(values_); }

Permutation Permutation::identity(int n) {
  if (n < 1) throw DataError("permutation size must be at least 1");
  std::vector<int> v(static_cast<size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  return make_unchecked(std::move(v));
}

Permutation Permutation::standardize(std::span<const int> distinct_values) {
  if (distinct_values.empty()) throw DataError("empty permutation");
  const size_t k = distinct_values.size();
  std::vector<size_t> order(k);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return distinct_values[a] < distinct_values[b]; });
  std::vector<int> out(k);
  for (size_t r = 0; r < k; ++r) {
    if (r > 0 && distinct_values[order[r]] == distinct_values[order[r - 1]]) {
      throw DataError("standardize: values are not distinct");
    }
    out[order[r]] = static_cast<int>(r) + 1;
  }
  return make_unchecked(std::move(out));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(values_.size());
  for (size_t i = 0; i < values_.size(); ++i) inv[static_cast<size_t>(values_[i] - 1)] = static_cast<int>(i) + 1;
  return make_unchecked(std::move(inv));
}

Permutation Permutation::reverse() const { return make_unchecked({values_.rbegin(), values_.rend()}); }

Permutation Permutation::complement() const {
  std::vector<int> out(values_);
  const int n1 = size() + 1;
  for (int& v : out) v = n1 - v;
  return make_unchecked(std::move(out));
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size()) throw std::invalid_argument("compose: size mismatch");
  std::vector<int> out(values_.size());
  for (int i = 1; i <= size(); ++i) out[static_cast<size_t>(i - 1)] = (*this)(other(i));
  return make_unchecked(std::move(out));
}

std::string Permutation::to_string() const {
  std::string out;
  if (size() <= 9) {
    for (int v : values_) out.push_back(static_cast<char>('0' + v));
    return out;
  }
  for (size_t i = 0; i < values_.size(); ++i) {
    if (i) out.push_back(' ');
    out += std::to_string(values_[i]);
  }
  return out;
}

Permutation parse_permutation(std::string_view text) {
  std::vector<int> values;
  size_t i = 0;
  int token_index = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',') {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size() && !(text[j] == ' ' || text[j] == '\t' || text[j] == '\n' || text[j] == '\r' ||
                                text[j] == ',')) {
      ++j;
    }
    ++token_index;
    const std::string_view token = text.substr(i, j - i);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw DataError("token '" + std::string(token) + "' at position " + std::to_string(token_index) +
                      " is not an integer");
    }
    values.push_back(value);
    i = j;
  }
  if (values.empty()) throw DataError("empty permutation");
  return Permutation(std::move(values));
}

Permutation parse_pattern(std::string_view text) {
  size_t b = 0;
  size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  const std::string_view core = text.substr(b, e - b);
  const bool compact = core.size() > 1 && std::all_of(core.begin(), core.end(), [](char c) {
    return c >= '1' && c <= '9';
  });
  if (!compact) return parse_permutation(text);
  std::vector<int> values;
  values.reserve(core.size());
  for (char c : core) values.push_back(c - '0');
  return Permutation(std::move(values));
}

// ---------------------------------------------------------------------------
// D4
// ---------------------------------------------------------------------------

std::string_view d4_name(D4 g) { return kNames[static_cast<int>(g)]; }

D4 parse_d4(std::string_view name) {
  for (int i = 0; i < 8; ++i) {
    if (kNames[i] == name) return static_cast<D4>(i);
  }
  throw DataError("unknown symmetry '" + std::string(name) + "'");
}

D4 d4_compose(D4 g, D4 h) {
  const auto& G = kMatrices[static_cast<int>(g)];
  const auto& H = kMatrices[static_cast<int>(h)];
  return from_matrix({G.a * H.a + G.b * H.c, G.a * H.b + G.b * H.d, G.c * H.a + G.d * H.c, G.c * H.b + G.d * H.d});
}

D4 d4_inverse(D4 g) {
  const auto& G = kMatrices[static_cast<int>(g)];
  return from_matrix({G.a, G.c, G.b, G.d});  // orthogonal: inverse = transpose
}

std::pair<int, int> d4_map_point(D4 g, int n, int x, int y) {
  const auto& m = kMatrices[static_cast<int>(g)];
  const int u = 2 * x - (n + 1);
  const int v = 2 * y - (n + 1);
  const int u2 = m.a * u + m.b * v;
  const int v2 = m.c * u + m.d * v;
  return {(u2 + n + 1) / 2, (v2 + n + 1) / 2};
}

Permutation d4_act(D4 g, const Permutation& pi) {
  const int n = pi.size();
  std::vector<int> out(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const auto [x, y] = d4_map_point(g, n, i, pi(i));
    out[static_cast<size_t>(x - 1)] = y;
  }
  return make_unchecked(std::move(out));
}

// ---------------------------------------------------------------------------
// PatternVector
// ---------------------------------------------------------------------------

void PatternVector::add(const Permutation& pattern, const Integer& delta) {
  if (delta.is_zero()) return;
  auto [it, inserted] = coefficients_.try_emplace(pattern, delta);
  if (!inserted) {
    it->second += delta;
    if (it->second.is_zero()) coefficients_.erase(it);
  }
}

Integer PatternVector::get(const Permutation& pattern) const {
  auto it = coefficients_.find(pattern);
  return it == coefficients_.end() ? Integer(0) : it->second;
}

PatternVector PatternVector::layer(int size) const {
  PatternVector out;
  for (const auto& [p, c] : coefficients_) {
    if (p.size() == size) out.coefficients_.emplace(p, c);
  }
  return out;
}

PatternVector PatternVector::transformed(D4 g) const {
  PatternVector out;
  for (const auto& [p, c] : coefficients_) out.add(d4_act(g, p), c);
  return out;
}

Integer PatternVector::evaluate_brute(const Permutation& pi) const {
  Integer total;
  for (const auto& [p, c] : coefficients_) total += c * count_pattern_brute(p, pi);
  return total;
}

std::string PatternVector::to_text() const {
  // Sort by the printed form so the output is lexicographic as text.
  std::vector<std::pair<std::string, const Integer*>> rows;
  rows.reserve(coefficients_.size());
  for (const auto& [p, c] : coefficients_) rows.emplace_back(p.to_string(), &c);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  for (const auto& [key, c] : rows) {
    out += key;
    out.push_back('\t');
    out += c->to_string();
    out.push_back('\n');
  }
  return out;
}

PatternVector PatternVector::parse_text(std::string_view text) {
  PatternVector out;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    const size_t tab = line.rfind('\t');
    if (tab == std::string_view::npos) {
      throw DataError("pattern vector line " + std::to_string(line_no) + ": expected 'pattern<TAB>coefficient'");
    }
    Permutation p = parse_pattern(line.substr(0, tab));
    Integer c;
    try {
      c = Integer::parse(line.substr(tab + 1));
    } catch (const std::invalid_argument&) {
      throw DataError("pattern vector line " + std::to_string(line_no) + ": bad coefficient");
    }
    if (out.coefficients_.count(p)) {
      throw DataError("pattern vector line " + std::to_string(line_no) + ": duplicate pattern " + p.to_string());
    }
    out.add(p, c);
    if (end == text.size()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Indexing
// ---------------------------------------------------------------------------

std::uint64_t factorial(int k) {
  if (k < 0 || k > 20) throw std::out_of_range("factorial argument out of range");
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::vector<Permutation> all_permutations(int k) {
  std::vector<Permutation> out;
  if (k < 1) return out;
  std::vector<int> v(static_cast<size_t>(k));
  std::iota(v.begin(), v.end(), 1);
  out.reserve(factorial(k));
  do {
    out.push_back(make_unchecked(v));
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

std::uint64_t lex_rank(std::span<const int> values) {
  const int k = static_cast<int>(values.size());
  std::uint64_t rank = 0;
  for (int i = 0; i < k; ++i) {
    int smaller_after = 0;
    for (int j = i + 1; j < k; ++j) smaller_after += values[static_cast<size_t>(j)] < values[static_cast<size_t>(i)];
    rank = rank * static_cast<std::uint64_t>(k - i) + static_cast<std::uint64_t>(smaller_after);
  }
  return rank;
}

Permutation lex_unrank(int k, std::uint64_t rank) {
  if (k < 1 || rank >= factorial(k)) throw std::out_of_range("lex_unrank: rank out of range");
  std::vector<int> digits(static_cast<size_t>(k));
  for (int i = k - 1; i >= 0; --i) {
    const auto base = static_cast<std::uint64_t>(k - i);
    digits[static_cast<size_t>(i)] = static_cast<int>(rank % base);
    rank /= base;
  }
  std::vector<int> pool(static_cast<size_t>(k));
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<int> out;
  out.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    const auto it = pool.begin() + digits[static_cast<size_t>(i)];
    out.push_back(*it);
    pool.erase(it);
  }
  return make_unchecked(std::move(out));
}

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  // Largest multiple of bound representable in 64 bits.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw > limit);
  return draw % bound;
}

Permutation random_permutation(int n, std::mt19937_64& rng) {
  if (n < 1) throw UsageError("permutation size must be at least 1");
  std::vector<int> v(static_cast<size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<size_t>(uniform_below(rng, static_cast<std::uint64_t>(i) + 1));
    std::swap(v[static_cast<size_t>(i)], v[j]);
  }
  return make_unchecked(std::move(v));
}

// ---------------------------------------------------------------------------
// Brute force
// ---------------------------------------------------------------------------

namespace {

// Pruned DFS: positions chosen so far are order-isomorphic to tau's prefix.
std::int64_t count_dfs(const Permutation& tau, const Permutation& pi, int depth, int next_pos,
                       std::vector<int>& chosen_values) {
  const int k = tau.size();
  if (depth == k) return 1;
  const int n = pi.size();
  std::int64_t total = 0;
  const int t = tau(depth + 1);
  for (int pos = next_pos; pos <= n - (k - depth) + 1; ++pos) {
    const int v = pi(pos);
    bool ok = true;
    for (int j = 0; j < depth; ++j) {
      if ((chosen_values[static_cast<size_t>(j)] < v) != (tau(j + 1) < t)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    chosen_values[static_cast<size_t>(depth)] = v;
    total += count_dfs(tau, pi, depth + 1, pos + 1, chosen_values);
  }
  return total;
}

void profile_dfs(const Permutation& pi, int k, int depth, int next_pos, std::vector<int>& chosen,
                 std::vector<std::int64_t>& counts) {
  const int n = pi.size();
  if (depth == k) {
    ++counts[lex_rank(chosen)];
    return;
  }
  for (int pos = next_pos; pos <= n - (k - depth) + 1; ++pos) {
    chosen[static_cast<size_t>(depth)] = pi(pos);
    profile_dfs(pi, k, depth + 1, pos + 1, chosen, counts);
  }
}

}  // namespace

Integer count_pattern_brute(const Permutation& tau, const Permutation& pi) {
  if (tau.size() > pi.size()) return Integer(0);
  std::vector<int> chosen(static_cast<size_t>(tau.size()));
  return Integer(count_dfs(tau, pi, 0, 1, chosen));
}

std::vector<std::int64_t> profile_brute_counts(const Permutation& pi, int k) {
  if (k < 1 || k > 10) throw GuardError("profile_brute supports 1 <= k <= 10");
  std::vector<std::int64_t> counts(factorial(k), 0);
  if (k > pi.size()) return counts;
  std::vector<int> chosen(static_cast<size_t>(k));
  profile_dfs(pi, k, 0, 1, chosen, counts);
  return counts;
}

PatternVector profile_brute(const Permutation& pi, int k) {
  const auto counts = profile_brute_counts(pi, k);
  PatternVector out;
  for (std::uint64_t r = 0; r < counts.size(); ++r) {
    if (counts[r] != 0) out.add(lex_unrank(k, r), Integer(counts[r]));
  }
  return out;
}

}  // namespace pattree
