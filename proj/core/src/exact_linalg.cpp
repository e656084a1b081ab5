#include "pattree/exact_linalg.hpp"

#include <algorithm>

#include "pattree/errors.hpp"

namespace pattree {
namespace {

std::vector<std::vector<mpz_class>> to_mpz(const IntegerMatrix& m) {
  std::vector<std::vector<mpz_class>> out;
  out.reserve(m.size());
  for (const auto& row : m) {
    std::vector<mpz_class> r;
    r.reserve(row.size());
    for (const auto& v : row) r.push_back(v.to_mpz());
    out.push_back(std::move(r));
  }
  return out;
}

size_t width_of(const IntegerMatrix& m) {
  const size_t w = m.empty() ? 0 : m.front().size();
  for (const auto& row : m) {
    if (row.size() != w) throw DataError("matrix rows have different lengths");
  }
  return w;
}

// Fraction-free elimination in place; returns the rank and, through `sign`,
// the parity of row swaps. After the call a[rank-1][last pivot] is the
// determinant of the leading pivot minor up to sign.
int bareiss(std::vector<std::vector<mpz_class>>& a, size_t cols, int& sign) {
  const size_t rows = a.size();
  mpz_class prev = 1;
  size_t r = 0;
  sign = 1;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      std::swap(a[piv], a[r]);
      sign = -sign;
    }
    for (size_t i = r + 1; i < rows; ++i) {
      for (size_t j = c + 1; j < cols; ++j) {
        a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]);
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return static_cast<int>(r);
}

}  // namespace

int bareiss_rank(const IntegerMatrix& m) {
  const size_t cols = width_of(m);
  auto a = to_mpz(m);
  int sign = 1;
  return bareiss(a, cols, sign);
}

Integer bareiss_determinant(const IntegerMatrix& m) {
  const size_t n = width_of(m);
  if (m.size() != n) throw DataError("determinant needs a square matrix");
  if (n == 0) return 1;
  auto a = to_mpz(m);
  int sign = 1;
  if (bareiss(a, n, sign) < static_cast<int>(n)) return 0;
  mpz_class d = a[n - 1][n - 1];
  if (sign < 0) d = -d;
  return Integer(d);
}

std::vector<Integer> primitive(std::vector<mpq_class> v) {
  mpz_class l = 1;
  for (const auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  std::vector<mpz_class> ints;
  ints.reserve(v.size());
  mpz_class g = 0;
  for (const auto& q : v) {
    mpz_class z = q.get_num() * (l / q.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    ints.push_back(std::move(z));
  }
  std::vector<Integer> out;
  out.reserve(ints.size());
  for (auto& z : ints) {
    if (g != 0) mpz_divexact(z.get_mpz_t(), z.get_mpz_t(), g.get_mpz_t());
    out.emplace_back(z);
  }
  return out;
}

std::vector<std::vector<Integer>> rational_nullspace(const IntegerMatrix& m) {
  const size_t cols = width_of(m);
  std::vector<std::vector<mpq_class>> a;
  for (const auto& row : m) {
    std::vector<mpq_class> r;
    for (const auto& v : row) r.emplace_back(v.to_mpz());
    a.push_back(std::move(r));
  }
  std::vector<size_t> pivot_cols;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < a.size(); ++c) {
    size_t piv = r;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[r]);
    const mpq_class inv = 1 / a[r][c];
    for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const mpq_class f = a[i][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<char> is_pivot(cols, 0);
  for (size_t c : pivot_cols) is_pivot[c] = 1;
  std::vector<std::vector<Integer>> out;
  for (size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<mpq_class> v(cols, 0);
    v[f] = 1;
    for (size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -a[i][f];
    out.push_back(primitive(std::move(v)));
  }
  return out;
}

mpz_class crt(const std::vector<std::uint32_t>& residues, const std::vector<std::uint32_t>& primes) {
  if (residues.size() != primes.size()) throw DataError("CRT needs one residue per prime");
  mpz_class x = 0;
  mpz_class m = 1;
  for (size_t i = 0; i < primes.size(); ++i) {
    const mpz_class p = primes[i];
    // x + m*t = r (mod p)
    mpz_class diff = mpz_class(residues[i]) - x;
    mpz_class inv;
    const mpz_class mm = m % p;
    mpz_invert(inv.get_mpz_t(), mm.get_mpz_t(), p.get_mpz_t());
    mpz_class t = (diff * inv) % p;
    if (t < 0) t += p;
    x += m * t;
    m *= p;
  }
  if (2 * x > m) x -= m;
  return x;
}

std::optional<mpq_class> rational_reconstruction(const mpz_class& a, const mpz_class& m) {
  mpz_class bound;
  mpz_class half = m / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = m, r1 = a % m;
  if (r1 < 0) r1 += m;
  mpz_class t0 = 0, t1 = 1;
  while (r1 > bound) {
    const mpz_class q = r0 / r1;
    mpz_class tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return std::nullopt;
  mpq_class q(r1, t1);
  q.canonicalize();
  return q;
}

std::optional<std::vector<Integer>> lift_solve(const std::vector<SparseRow>& rows, const ModularEchelon& factor,
                                               const std::vector<Integer>& b, const Integer& bound) {
  const size_t n = rows.size();
  if (factor.columns() != static_cast<int>(n) || b.size() != n) throw DataError("lifting: dimension mismatch");
  const std::uint32_t p = factor.prime();
  std::vector<Integer> x(n);
  std::vector<Integer> r = b;
  Integer scale = 1;
  std::vector<std::uint32_t> residue(n);
  while (true) {
    if (std::all_of(r.begin(), r.end(), [](const Integer& v) { return v.is_zero(); })) return x;
    if (scale > bound) return std::nullopt;
    for (size_t i = 0; i < n; ++i) residue[i] = static_cast<std::uint32_t>(r[i].mod(p));
    const std::vector<std::uint32_t> y = factor.solve(residue);
    for (size_t j = 0; j < n; ++j) {
      if (y[j] != 0) x[j] += scale * Integer(static_cast<long>(y[j]));
    }
    for (size_t i = 0; i < n; ++i) {
      __int128 dot = 0;
      for (const auto& [c, v] : rows[i]) dot += static_cast<__int128>(v) * y[static_cast<size_t>(c)];
      r[i] -= Integer(dot);
      r[i] = r[i].divide_exact(p);
    }
    scale *= Integer(static_cast<long>(p));
  }
}

}  // namespace pattree
