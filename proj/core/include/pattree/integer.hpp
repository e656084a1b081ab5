#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace pattree {

/// Arbitrary-precision signed integer with a 128-bit fast path.
///
/// Values that fit in a signed 128-bit word are held inline; any operation
/// that would overflow promotes the result to a GMP integer. Results that fit
/// again are demoted, so equal values always compare equal regardless of
/// representation.
class Integer {
 public:
  using small_type = __int128;

  Integer() noexcept = default;
  Integer(int v) noexcept : small_(v) {}                // NOLINT(implicit)
  Integer(long v) noexcept : small_(v) {}               // NOLINT(implicit)
  Integer(long long v) noexcept : small_(v) {}          // NOLINT(implicit)
  Integer(unsigned long v) noexcept : small_(v) {}      // NOLINT(implicit)
  Integer(unsigned long long v) noexcept : small_(v) {} // NOLINT(implicit)
  Integer(small_type v) noexcept : small_(v) {}         // NOLINT(implicit)
  explicit Integer(const mpz_class& v);

  /// Parses an optionally signed decimal literal. Throws std::invalid_argument.
  static Integer parse(std::string_view text);

  Integer(const Integer& other);
  Integer(Integer&& other) noexcept = default;
  Integer& operator=(const Integer& other);
  Integer& operator=(Integer&& other) noexcept = default;
  ~Integer() = default;

  [[nodiscard]] bool is_small() const noexcept { return !big_; }
  [[nodiscard]] small_type small() const noexcept { return small_; }
  [[nodiscard]] mpz_class to_mpz() const;

  [[nodiscard]] bool is_zero() const noexcept { return !big_ && small_ == 0; }
  [[nodiscard]] int sign() const noexcept;
  [[nodiscard]] bool fits_int64() const noexcept;
  /// Throws std::overflow_error when the value does not fit.
  [[nodiscard]] std::int64_t to_int64() const;
  [[nodiscard]] std::string to_string() const;

  /// Remainder in [0, m).
  [[nodiscard]] std::uint64_t mod(std::uint64_t m) const;
  /// Exact division; throws std::domain_error if d does not divide *this.
  [[nodiscard]] Integer divide_exact(std::int64_t d) const;

  Integer& operator+=(const Integer& rhs) {
    if (!big_ && !rhs.big_) {
      small_type r;
      if (!__builtin_add_overflow(small_, rhs.small_, &r)) {
        small_ = r;
        return *this;
      }
    }
    return slow_add(rhs, false);
  }
  Integer& operator-=(const Integer& rhs) {
    if (!big_ && !rhs.big_) {
      small_type r;
      if (!__builtin_sub_overflow(small_, rhs.small_, &r)) {
        small_ = r;
        return *this;
      }
    }
    return slow_add(rhs, true);
  }
  Integer& operator*=(const Integer& rhs) {
    if (!big_ && !rhs.big_) {
      small_type r;
      if (!__builtin_mul_overflow(small_, rhs.small_, &r)) {
        small_ = r;
        return *this;
      }
    }
    return slow_mul(rhs);
  }

  friend Integer operator+(Integer a, const Integer& b) { return a += b; }
  friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
  friend Integer operator*(Integer a, const Integer& b) { return a *= b; }
  Integer operator-() const { return Integer(0) - *this; }

  friend bool operator==(const Integer& a, const Integer& b) noexcept {
    if (!a.big_ && !b.big_) return a.small_ == b.small_;
    return a.compare(b) == 0;
  }
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) noexcept {
    if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
    const int c = a.compare(b);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Integer& v);

 private:
  Integer& slow_add(const Integer& rhs, bool subtract);
  Integer& slow_mul(const Integer& rhs);
  [[nodiscard]] int compare(const Integer& other) const noexcept;
  void assign_mpz(const mpz_class& v);

  small_type small_ = 0;
  std::unique_ptr<mpz_class> big_;
};

/// C(n, k) exactly; zero when k < 0 or k > n.
Integer binomial(std::int64_t n, std::int64_t k);

}  // namespace pattree
