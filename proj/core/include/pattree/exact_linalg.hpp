#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "pattree/integer.hpp"
#include "pattree/modular.hpp"

namespace pattree {

using IntegerMatrix = std::vector<std::vector<Integer>>;

/// Rank over the rationals by fraction-free (Bareiss) elimination.
int bareiss_rank(const IntegerMatrix& m);
/// Determinant of a square matrix by Bareiss elimination.
Integer bareiss_determinant(const IntegerMatrix& m);

/// Basis of the right kernel {x : m x = 0} over Q, scaled to primitive
/// integer vectors (gcd 1). Exact rational elimination; for small matrices.
std::vector<std::vector<Integer>> rational_nullspace(const IntegerMatrix& m);

/// Scales a rational vector to the integer vector with the same direction
/// whose entries have gcd 1.
std::vector<Integer> primitive(std::vector<mpq_class> v);

/// Combines residues r_i mod p_i into the symmetric residue mod prod p_i.
mpz_class crt(const std::vector<std::uint32_t>& residues, const std::vector<std::uint32_t>& primes);

/// Rational p/q with |p|, q <= sqrt(m/2) congruent to a mod m, if one exists.
std::optional<mpq_class> rational_reconstruction(const mpz_class& a, const mpz_class& m);

/// Solves B x = b exactly for a square integer matrix B given as sparse rows
/// and a recorded full-rank factorization of B mod p, by p-adic lifting.
/// Returns the solution when it is a non-negative integer vector with
/// entries below the first power of p exceeding `bound`, and nullopt when the
/// exact solution is negative, fractional, or larger than that.
std::optional<std::vector<Integer>> lift_solve(const std::vector<SparseRow>& rows, const ModularEchelon& factor,
                                               const std::vector<Integer>& b, const Integer& bound);

}  // namespace pattree
