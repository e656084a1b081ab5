#include "pattree/modular.hpp"

#include <algorithm>
#include <stdexcept>

#include "pattree/errors.hpp"

namespace pattree {
namespace {

// Flush accumulated products before 2^64 could overflow: each step adds less
// than 2^52 to an entry.
constexpr int kFlushEvery = 4000;

std::uint32_t mulmod(std::uint64_t a, std::uint64_t b, std::uint32_t p) { return static_cast<std::uint32_t>(a * b % p); }

}  // namespace

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

std::vector<std::uint32_t> modular_primes(int count) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = (1U << 26) - 1; static_cast<int>(out.size()) < count; v -= 2) {
    if (is_prime(v)) out.push_back(v);
  }
  return out;
}

std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw std::domain_error("residue is not invertible");
  return static_cast<std::uint32_t>(t < 0 ? t + p : t);
}

std::uint32_t to_residue(std::int64_t v, std::uint32_t p) {
  const std::int64_t r = v % static_cast<std::int64_t>(p);
  return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

ModularEchelon::ModularEchelon(int columns, std::uint32_t prime, bool record)
    : n_(columns), p_(prime), record_(record) {
  if (columns < 0) throw UsageError("matrix column count must be non-negative");
  if (prime < 2 || prime >= (1U << 26)) throw UsageError("modulus must lie in [2, 2^26)");
  acc_.assign(static_cast<size_t>(columns), 0);
}

bool ModularEchelon::insert(const SparseRow& row) {
  if (full()) return false;
  std::fill(acc_.begin(), acc_.end(), 0);
  bool any = false;
  for (const auto& [c, v] : row) {
    if (c < 0 || c >= n_) throw DataError("sparse row column out of range");
    acc_[static_cast<size_t>(c)] = to_residue(v, p_);
    any = any || acc_[static_cast<size_t>(c)] != 0;
  }
  if (!any) return false;
  std::vector<std::uint32_t> coeffs;
  if (record_) coeffs.reserve(pivots_.size() + 1);
  const size_t n = static_cast<size_t>(n_);
  int pending = 0;
  for (size_t i = 0; i < pivots_.size(); ++i) {
    const size_t col = static_cast<size_t>(pivots_[i]);
    const std::uint32_t c = static_cast<std::uint32_t>(acc_[col] % p_);
    if (record_) coeffs.push_back(c);
    if (c == 0) {
      acc_[col] = 0;
      continue;
    }
    const std::uint64_t neg = p_ - c;
    const std::uint32_t* u = upper_.data() + i * n;
    std::uint64_t* a = acc_.data();
    for (size_t j = col; j < n; ++j) a[j] += neg * u[j];
    if (++pending == kFlushEvery) {
      for (auto& x : acc_) x %= p_;
      pending = 0;
    }
  }
  size_t lead = n;
  for (size_t j = 0; j < n; ++j) {
    acc_[j] %= p_;
    if (lead == n && acc_[j] != 0) lead = j;
  }
  if (lead == n) return false;
  const std::uint32_t pivot = static_cast<std::uint32_t>(acc_[lead]);
  const std::uint32_t inv = mod_inverse(pivot, p_);
  const size_t base = upper_.size();
  upper_.resize(base + n);
  for (size_t j = 0; j < n; ++j) upper_[base + j] = mulmod(acc_[j], inv, p_);
  pivots_.push_back(static_cast<int>(lead));
  if (record_) {
    coeffs.push_back(pivot);
    lower_.push_back(std::move(coeffs));
  }
  return true;
}

std::vector<std::uint32_t> ModularEchelon::solve(std::span<const std::uint32_t> rhs) const {
  if (!record_ || !full()) throw std::logic_error("modular solve needs a recorded full-rank factorization");
  if (static_cast<int>(rhs.size()) != n_) throw DataError("right-hand side has the wrong length");
  const size_t n = static_cast<size_t>(n_);
  std::vector<std::uint32_t> y(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& l = lower_[i];
    std::uint64_t s = rhs[i] % p_;
    std::uint64_t sub = 0;
    int pending = 0;
    for (size_t j = 0; j < i; ++j) {
      sub += static_cast<std::uint64_t>(l[j]) * y[j];
      if (++pending == kFlushEvery) {
        sub %= p_;
        pending = 0;
      }
    }
    sub %= p_;
    s = (s + p_ - sub) % p_;
    y[i] = mulmod(s, mod_inverse(l[i], p_), p_);
  }
  std::vector<std::uint32_t> x(n, 0);
  for (size_t i = n; i-- > 0;) {
    const std::uint32_t* u = upper_.data() + i * n;
    const size_t col = static_cast<size_t>(pivots_[i]);
    std::uint64_t sub = 0;
    int pending = 0;
    for (size_t j = col + 1; j < n; ++j) {
      sub += static_cast<std::uint64_t>(u[j]) * x[j];
      if (++pending == kFlushEvery) {
        sub %= p_;
        pending = 0;
      }
    }
    sub %= p_;
    x[col] = static_cast<std::uint32_t>((y[i] + p_ - sub) % p_);
  }
  return x;
}

std::vector<std::vector<std::uint32_t>> ModularEchelon::nullspace() const {
  const size_t n = static_cast<size_t>(n_);
  const size_t r = pivots_.size();
  // Reduced row echelon form: clear each pivot column from the other rows.
  std::vector<std::uint32_t> red = upper_;
  std::vector<size_t> order(r);
  for (size_t i = 0; i < r; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return pivots_[a] < pivots_[b]; });
  for (size_t oi = r; oi-- > 0;) {
    const size_t i = order[oi];
    const size_t col = static_cast<size_t>(pivots_[i]);
    const std::uint32_t* src = red.data() + i * n;
    for (size_t k = 0; k < r; ++k) {
      if (k == i) continue;
      std::uint32_t* dst = red.data() + k * n;
      const std::uint32_t c = dst[col];
      if (c == 0) continue;
      const std::uint64_t neg = p_ - c;
      for (size_t j = col; j < n; ++j) dst[j] = static_cast<std::uint32_t>((dst[j] + neg * src[j]) % p_);
    }
  }
  std::vector<char> is_pivot(n, 0);
  for (int c : pivots_) is_pivot[static_cast<size_t>(c)] = 1;
  std::vector<std::vector<std::uint32_t>> out;
  for (size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<std::uint32_t> v(n, 0);
    v[f] = 1;
    for (size_t i = 0; i < r; ++i) {
      const std::uint32_t e = red[i * n + f];
      v[static_cast<size_t>(pivots_[i])] = e == 0 ? 0 : p_ - e;
    }
    out.push_back(std::move(v));
  }
  return out;
}

ModularEchelon ModularEchelon::from_parts(int columns, std::uint32_t prime, std::vector<int> pivots,
                                          std::vector<std::uint32_t> upper,
                                          std::vector<std::vector<std::uint32_t>> lower) {
  ModularEchelon e(columns, prime, true);
  const size_t n = static_cast<size_t>(columns);
  if (pivots.size() != n || upper.size() != n * n || lower.size() != n) {
    throw DataError("persisted factorization has inconsistent dimensions");
  }
  for (size_t i = 0; i < n; ++i) {
    if (lower[i].size() != i + 1 || lower[i][i] == 0) throw DataError("persisted factorization is malformed");
  }
  e.pivots_ = std::move(pivots);
  e.upper_ = std::move(upper);
  e.lower_ = std::move(lower);
  return e;
}

}  // namespace pattree
