#include <gmpxx.h>

#include <random>

#include "doctest.h"
#include "pattree/integer.hpp"

using pattree::Integer;

TEST_CASE("small arithmetic and printing") {
  Integer a = 12;
  Integer b = -30;
  CHECK((a + b).to_string() == "-18");
  CHECK((a * b).to_string() == "-360");
  CHECK((a - b) == Integer(42));
  CHECK(Integer(0).is_zero());
  CHECK(Integer::parse("-0").is_zero());
  CHECK(Integer::parse("+17") == Integer(17));
}

TEST_CASE("overflow promotes to arbitrary precision and demotes back") {
  Integer big = Integer::parse("170141183460469231731687303715884105727");  // 2^127 - 1
  Integer twice = big + big;
  CHECK(twice.to_string() == "340282366920938463463374607431768211454");
  CHECK_FALSE(twice.is_small());
  Integer back = twice - big;
  CHECK(back == big);
  Integer zero = twice - twice;
  CHECK(zero.is_zero());
  CHECK(zero.is_small());
}

TEST_CASE("random products agree with GMP") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    mpz_class ref = 1;
    Integer acc = 1;
    for (int i = 0; i < 6; ++i) {
      const long f = static_cast<long>(rng() % 2000000001ULL) - 1000000000L;
      ref *= f;
      acc *= Integer(f);
      const long g = static_cast<long>(rng() % 1000ULL);
      ref += g;
      acc += Integer(g);
    }
    CHECK(acc.to_string() == ref.get_str());
    CHECK(acc.mod(1000003) == mpz_class(((ref % 1000003) + 1000003) % 1000003).get_ui());
  }
}

TEST_CASE("ordering and binomials") {
  CHECK(Integer(-5) < Integer(3));
  CHECK(Integer::parse("100000000000000000000000000000000000000000") > Integer(1));
  CHECK(pattree::binomial(40, 5) == Integer(658008));
  CHECK(pattree::binomial(3, 5).is_zero());
  CHECK(Integer(84).divide_exact(7) == Integer(12));
  CHECK_THROWS((void)Integer(85).divide_exact(7));
}
