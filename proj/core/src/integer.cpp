#include "pattree/integer.hpp"

#include <ostream>
#include <stdexcept>

namespace pattree {
namespace {

using u128 = unsigned __int128;

mpz_class mpz_from_small(__int128 v) {
  const bool negative = v < 0;
  u128 mag = negative ? u128(0) - u128(v) : u128(v);
  std::uint64_t limbs[2] = {static_cast<std::uint64_t>(mag), static_cast<std::uint64_t>(mag >> 64)};
  mpz_class out;
  mpz_import(out.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, limbs);
  if (negative) out = -out;
  return out;
}

// Returns true and writes `out` when v fits in a signed 128-bit word.
bool small_from_mpz(const mpz_class& v, __int128& out) {
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > 126) return false;
  std::uint64_t limbs[2] = {0, 0};
  size_t count = 0;
  mpz_export(limbs, &count, -1, sizeof(std::uint64_t), 0, 0, v.get_mpz_t());
  u128 mag = (u128(limbs[1]) << 64) | limbs[0];
  out = sgn(v) < 0 ? -static_cast<__int128>(mag) : static_cast<__int128>(mag);
  return true;
}

std::string small_to_string(__int128 v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  u128 mag = negative ? u128(0) - u128(v) : u128(v);
  std::string digits;
  while (mag > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (negative) digits.push_back('-');
  return {digits.rbegin(), digits.rend()};
}

}  // namespace

Integer::Integer(const mpz_class& v) { assign_mpz(v); }

Integer::Integer(const Integer& other) : small_(other.small_) {
  if (other.big_) big_ = std::make_unique<mpz_class>(*other.big_);
}

Integer& Integer::operator=(const Integer& other) {
  if (this == &other) return *this;
  small_ = other.small_;
  if (other.big_) {
    big_ = std::make_unique<mpz_class>(*other.big_);
  } else {
    big_.reset();
  }
  return *this;
}

Integer Integer::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty integer literal");
  size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) throw std::invalid_argument("malformed integer literal");
  for (size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw std::invalid_argument("malformed integer literal: " + std::string(text));
    }
  }
  std::string digits(text.substr(text[0] == '+' ? 1 : 0));
  return Integer(mpz_class(digits, 10));
}

void Integer::assign_mpz(const mpz_class& v) {
  __int128 s;
  if (small_from_mpz(v, s)) {
    small_ = s;
    big_.reset();
  } else {
    small_ = 0;
    big_ = std::make_unique<mpz_class>(v);
  }
}

mpz_class Integer::to_mpz() const { return big_ ? *big_ : mpz_from_small(small_); }

int Integer::sign() const noexcept {
  if (big_) return sgn(*big_);
  return small_ < 0 ? -1 : (small_ > 0 ? 1 : 0);
}

bool Integer::fits_int64() const noexcept {
  return !big_ && small_ >= INT64_MIN && small_ <= INT64_MAX;
}

std::int64_t Integer::to_int64() const {
  if (!fits_int64()) throw std::overflow_error("integer does not fit in 64 bits: " + to_string());
  return static_cast<std::int64_t>(small_);
}

std::string Integer::to_string() const { return big_ ? big_->get_str() : small_to_string(small_); }

std::uint64_t Integer::mod(std::uint64_t m) const {
  if (!big_) {
    __int128 r = small_ % static_cast<__int128>(m);
    if (r < 0) r += m;
    return static_cast<std::uint64_t>(r);
  }
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), big_->get_mpz_t(), m);
  return r.get_ui();
}

Integer Integer::divide_exact(std::int64_t d) const {
  if (d == 0) throw std::domain_error("division by zero");
  if (!big_) {
    if (small_ % d != 0) throw std::domain_error("inexact division");
    return Integer(static_cast<__int128>(small_ / d));
  }
  mpz_class dd(static_cast<long>(d));
  if (!mpz_divisible_p(big_->get_mpz_t(), dd.get_mpz_t())) throw std::domain_error("inexact division");
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), big_->get_mpz_t(), dd.get_mpz_t());
  return Integer(q);
}

Integer& Integer::slow_add(const Integer& rhs, bool subtract) {
  mpz_class a = to_mpz();
  mpz_class b = rhs.to_mpz();
  assign_mpz(subtract ? mpz_class(a - b) : mpz_class(a + b));
  return *this;
}

Integer& Integer::slow_mul(const Integer& rhs) {
  mpz_class a = to_mpz();
  mpz_class b = rhs.to_mpz();
  assign_mpz(a * b);
  return *this;
}

int Integer::compare(const Integer& other) const noexcept {
  if (!big_ && !other.big_) return small_ < other.small_ ? -1 : (small_ > other.small_ ? 1 : 0);
  const int c = cmp(to_mpz(), other.to_mpz());
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::ostream& operator<<(std::ostream& os, const Integer& v) { return os << v.to_string(); }

Integer binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return Integer(0);
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Integer(r);
}

}  // namespace pattree
