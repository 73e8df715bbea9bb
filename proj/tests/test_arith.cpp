#include "doctest.h"
#include "katofan/arith.hpp"
#include "katofan/rational.hpp"

using namespace katofan;

TEST_CASE("checked arithmetic raises on overflow") {
  CHECK(checked_add(2, 3) == 5);
  CHECK_THROWS_AS(checked_add(INT64_MAX, 1), ArithmeticOverflow);
  CHECK_THROWS_AS(checked_mul(INT64_MAX / 2 + 1, 2), ArithmeticOverflow);
  CHECK_THROWS_AS(checked_neg(INT64_MIN), ArithmeticOverflow);
}

TEST_CASE("floor division and gcd") {
  CHECK(floor_div(7, 2) == 3);
  CHECK(floor_div(-7, 2) == -4);
  CHECK(floor_div(7, -2) == -4);
  CHECK(floor_div(-6, 3) == -2);
  const auto e = extended_gcd(240, 46);
  CHECK(e.g == 2);
  CHECK(e.x * 240 + e.y * 46 == 2);
  CHECK(extended_gcd(0, -5).g == 5);
}

TEST_CASE("vector helpers") {
  CHECK(primitive(Vec{4, -6}) == Vec{2, -3});
  CHECK(primitive(Vec{0, 0}) == Vec{0, 0});
  CHECK(content(Vec{0, 9, 12}) == 3);
  CHECK(dot(Vec{1, 2}, Vec{3, 4}) == 11);
  CHECK(combine(2, Vec{1, 0}, -1, Vec{0, 1}) == Vec{2, -1});
  CHECK(to_string(Vec{1, -2}) == "(1,-2)");
}

TEST_CASE("rationals normalize and compare") {
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational::parse("-3/6") == Rational(-1, 2));
  CHECK(Rational::parse("7").is_integer());
  CHECK(Rational(5, 10).str() == "1/2");
  CHECK_THROWS_AS(Rational::parse("1/0"), InvalidInput);
  CHECK_THROWS_AS(Rational::parse("x"), InvalidInput);
  CHECK_THROWS_AS(Rational(1) / Rational(0), ArithmeticOverflow);
}
