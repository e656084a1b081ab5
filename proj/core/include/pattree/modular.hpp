#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace pattree {

/// Primes below 2^26, largest first. Products of two residues fit in 52 bits,
/// so thousands of products can be accumulated in 64 bits before reducing.
std::vector<std::uint32_t> modular_primes(int count);
inline constexpr std::uint32_t kDefaultPrime = 67108859;  // 2^26 - 5

bool is_prime(std::uint64_t v);
std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p);
/// Reduces a signed value into [0, p).
std::uint32_t to_residue(std::int64_t v, std::uint32_t p);

/// Sparse row: (column, value) pairs with distinct columns.
using SparseRow = std::vector<std::pair<int, std::int64_t>>;

/// Incremental row echelon form over Z/p.
///
/// Rows are inserted one at a time and reduced against the pivots found so
/// far. With `record` set, independent rows are kept as a factorization
/// B = L * U of the accepted rows B (L lower triangular, U unit upper
/// triangular after permuting columns into pivot order), which solve() uses.
class ModularEchelon {
 public:
  explicit ModularEchelon(int columns, std::uint32_t prime = kDefaultPrime, bool record = false);

  [[nodiscard]] int columns() const noexcept { return n_; }
  [[nodiscard]] int rank() const noexcept { return static_cast<int>(pivots_.size()); }
  [[nodiscard]] bool full() const noexcept { return rank() == n_; }
  [[nodiscard]] std::uint32_t prime() const noexcept { return p_; }

  /// Reduces the row; returns true (and keeps it) when it is independent.
  bool insert(const SparseRow& row);

  /// Solves B x = rhs over Z/p for the accepted rows (requires record and a
  /// full-rank state). rhs[i] pairs with the i-th accepted row.
  [[nodiscard]] std::vector<std::uint32_t> solve(std::span<const std::uint32_t> rhs) const;

  /// Basis of {x : U x = 0} mod p, one vector per non-pivot column, taken
  /// from the reduced row echelon form (entry 1 at its free column).
  [[nodiscard]] std::vector<std::vector<std::uint32_t>> nullspace() const;
  /// Pivot column of each accepted row, in insertion order.
  [[nodiscard]] const std::vector<int>& pivots() const noexcept { return pivots_; }

  // Factorization access for persistence.
  [[nodiscard]] const std::vector<std::uint32_t>& upper_rows() const noexcept { return upper_; }
  [[nodiscard]] const std::vector<std::vector<std::uint32_t>>& lower_rows() const noexcept { return lower_; }
  /// Rebuilds a recorded, full-rank factorization from persisted parts.
  static ModularEchelon from_parts(int columns, std::uint32_t prime, std::vector<int> pivots,
                                   std::vector<std::uint32_t> upper, std::vector<std::vector<std::uint32_t>> lower);

 private:
  int n_;
  std::uint32_t p_;
  bool record_;
  std::vector<int> pivots_;
  std::vector<std::uint32_t> upper_;               // rank x n, row-major; pivot entries are 1
  std::vector<std::vector<std::uint32_t>> lower_;  // row i has i+1 entries
  std::vector<std::uint64_t> acc_;
};

}  // namespace pattree
