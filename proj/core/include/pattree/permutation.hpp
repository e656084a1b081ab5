#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pattree/integer.hpp"

namespace pattree {

/// A permutation of {1..n} in one-line notation: position i (1-based) maps to
/// value pi(i). The point set of a permutation is {(i, pi(i))}.
class Permutation {
 public:
  /// The permutation 1 of size one.
  Permutation() : values_{1} {}
  /// Validates that `values` is a bijection on {1..n}; throws DataError.
  explicit Permutation(std::vector<int> values);

  static Permutation identity(int n);
  /// Order-isomorphic relabelling of distinct integers onto {1..k}.
  static Permutation standardize(std::span<const int> distinct_values);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(values_.size()); }
  /// pi(i) for 1 <= i <= n.
  [[nodiscard]] int operator()(int i) const noexcept { return values_[static_cast<size_t>(i - 1)]; }
  [[nodiscard]] std::span<const int> values() const noexcept { return values_; }

  [[nodiscard]] Permutation inverse() const;
  [[nodiscard]] Permutation reverse() const;
  [[nodiscard]] Permutation complement() const;
  /// (*this o other)(i) = (*this)(other(i)); sizes must match.
  [[nodiscard]] Permutation compose(const Permutation& other) const;

  /// Digits run together when every value is a single digit ("2413"),
  /// otherwise space separated ("10 2 1 ...").
  [[nodiscard]] std::string to_string() const;

  friend auto operator<=>(const Permutation&, const Permutation&) = default;
  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  struct Unchecked {};
  Permutation(std::vector<int> values, Unchecked) : values_(std::move(values)) {}
  friend Permutation make_unchecked(std::vector<int> values);

  std::vector<int> values_;
};

/// Builds a permutation without validation; the caller guarantees a bijection.
Permutation make_unchecked(std::vector<int> values);

/// Parses whitespace- or comma-separated one-line notation. Errors (duplicate,
/// out-of-range, empty, non-integer) are reported as DataError naming the
/// offending token position.
Permutation parse_permutation(std::string_view text);

/// Parses either one-line notation or a compact digit string such as "2413"
/// (a single token of digits 1-9 with no separators is read digit by digit).
Permutation parse_pattern(std::string_view text);

// ---------------------------------------------------------------------------
// Dihedral group of the square acting on permutation point sets.
//
// Elements are named by their geometric action on the square [1,n]^2 with the
// x axis along positions and the y axis along values:
//
//   identity               (x, y)           pi
//   rot90                  (n+1-y, x)       counter-clockwise quarter turn
//   rot180                 (n+1-x, n+1-y)   reverse + complement
//   rot270                 (y, n+1-x)
//   reflect-horizontal     (x, n+1-y)       complement (flip about horizontal axis)
//   reflect-vertical       (n+1-x, y)       reverse    (flip about vertical axis)
//   reflect-main-diagonal  (y, x)           inverse
//   reflect-anti-diagonal  (n+1-y, n+1-x)   rot180 o inverse
//
// compose(g, h) is the element "apply h, then g".
// ---------------------------------------------------------------------------
enum class D4 : std::uint8_t {
  identity,
  rot90,
  rot180,
  rot270,
  reflect_horizontal,
  reflect_vertical,
  reflect_main_diagonal,
  reflect_anti_diagonal,
};

inline constexpr std::array<D4, 8> kAllD4 = {
    D4::identity,           D4::rot90,           D4::rot180,
    D4::rot270,             D4::reflect_horizontal, D4::reflect_vertical,
    D4::reflect_main_diagonal, D4::reflect_anti_diagonal};

std::string_view d4_name(D4 g);
/// Throws DataError for unknown names.
D4 parse_d4(std::string_view name);
D4 d4_compose(D4 g, D4 h);
D4 d4_inverse(D4 g);
/// Image of the point (x, y) of [1,n]^2 under g.
std::pair<int, int> d4_map_point(D4 g, int n, int x, int y);
/// g.pi: the permutation whose point set is g(p(pi)).
Permutation d4_act(D4 g, const Permutation& pi);

// ---------------------------------------------------------------------------
// Pattern vectors: formal integer combinations of patterns.
// ---------------------------------------------------------------------------
class PatternVector {
 public:
  using Map = std::map<Permutation, Integer>;

  PatternVector() = default;

  /// Adds `delta` to the coefficient of `pattern`; zero results are erased.
  void add(const Permutation& pattern, const Integer& delta);
  [[nodiscard]] Integer get(const Permutation& pattern) const;
  [[nodiscard]] bool empty() const noexcept { return coefficients_.empty(); }
  [[nodiscard]] size_t support_size() const noexcept { return coefficients_.size(); }
  [[nodiscard]] const Map& coefficients() const noexcept { return coefficients_; }
  [[nodiscard]] auto begin() const { return coefficients_.begin(); }
  [[nodiscard]] auto end() const { return coefficients_.end(); }

  /// Entries whose pattern has exactly `size` points.
  [[nodiscard]] PatternVector layer(int size) const;
  /// Applies g to every key.
  [[nodiscard]] PatternVector transformed(D4 g) const;
  /// Sum of coef * count(pattern, pi) using the brute-force counter.
  [[nodiscard]] Integer evaluate_brute(const Permutation& pi) const;

  /// Lines "pattern<TAB>coefficient", sorted lexicographically by pattern.
  [[nodiscard]] std::string to_text() const;
  static PatternVector parse_text(std::string_view text);

  friend bool operator==(const PatternVector&, const PatternVector&) = default;

 private:
  Map coefficients_;
};

// ---------------------------------------------------------------------------
// Pattern indexing for small sizes (lexicographic rank within S_k).
// ---------------------------------------------------------------------------
/// k! for 0 <= k <= 20.
std::uint64_t factorial(int k);
/// All permutations of size k in lexicographic order.
std::vector<Permutation> all_permutations(int k);
/// Lexicographic rank of a permutation of {1..k} given as values (k <= 20).
std::uint64_t lex_rank(std::span<const int> values);
Permutation lex_unrank(int k, std::uint64_t rank);

// ---------------------------------------------------------------------------
// Reproducible randomness. Both functions depend only on the mt19937_64
// output stream, so results are identical across platforms and compilers.
// ---------------------------------------------------------------------------
/// Uniform integer in [0, bound) by rejection from 64-bit draws (bound >= 1).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);
/// Uniform permutation of size n: Fisher-Yates from the back, swapping slot i
/// with slot uniform_below(i + 1).
Permutation random_permutation(int n, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Brute-force oracles.
// ---------------------------------------------------------------------------
/// Number of occurrences of tau in pi, by pruned enumeration of position subsets.
Integer count_pattern_brute(const Permutation& tau, const Permutation& pi);
/// Every occurrence count of a pattern of size k in pi (k <= 10), classified
/// in a single pass over all k-subsets. Zero counts are not stored.
PatternVector profile_brute(const Permutation& pi, int k);
/// Raw counts indexed by lex_rank, length k! (k <= 10).
std::vector<std::int64_t> profile_brute_counts(const Permutation& pi, int k);

}  // namespace pattree
