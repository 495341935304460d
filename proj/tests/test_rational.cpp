#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "recomb/errors.hpp"
#include "recomb/rational.hpp"

using namespace recomb;

TEST_CASE("parse_rational accepts exact forms only") {
  CHECK(parse_rational("3/4") == Rat(3, 4));
  CHECK(parse_rational("-3/4") == Rat(-3, 4));
  CHECK(parse_rational("+2") == Rat(2));
  CHECK(parse_rational(" 6/8 ") == Rat(3, 4));
  CHECK(parse_rational("0") == Rat(0));
  CHECK_THROWS_AS(parse_rational("0.25"), validation_error);
  CHECK_THROWS_AS(parse_rational("1e-3"), validation_error);
  CHECK_THROWS_AS(parse_rational("1/0"), validation_error);
  CHECK_THROWS_AS(parse_rational(""), validation_error);
  CHECK_THROWS_AS(parse_rational("/3"), validation_error);
  CHECK_THROWS_AS(parse_rational("a"), validation_error);
}

TEST_CASE("format_fraction lowest terms") {
  CHECK(format_fraction(Rat(1, 2)) == "1/2");
  CHECK(format_fraction(Rat(4, 8)) == "1/2");
  CHECK(format_fraction(Rat(2)) == "2");
  CHECK(format_fraction(Rat(-1, 3)) == "-1/3");
  CHECK(format_fraction(Rat(0)) == "0");
}

TEST_CASE("format_decimal exact long division") {
  CHECK(format_decimal(Rat(1, 2), 4) == "0.5000");
  CHECK(format_decimal(Rat(1, 3), 6) == "0.333333");
  CHECK(format_decimal(Rat(2, 3), 6) == "0.666667");
  CHECK(format_decimal(Rat(-1, 8), 3) == "-0.125");
  CHECK(format_decimal(Rat(1), 2) == "1.00");
  CHECK(format_decimal(Rat(999, 1000), 2) == "1.00");  // carry into the whole part
  // Half cases round to even.
  CHECK(format_decimal(Rat(1, 8), 2) == "0.12");
  CHECK(format_decimal(Rat(3, 8), 2) == "0.38");
  CHECK(format_decimal(Rat(0), 3) == "0.000");
  CHECK(format_decimal(Rat(-1, 10000), 2) == "0.00");  // negative rounds to signless zero
}

TEST_CASE("rat_pow") {
  CHECK(rat_pow(Rat(1, 2), 10) == Rat(1, 1024));
  CHECK(rat_pow(Rat(1, 2), -3) == Rat(8));
  CHECK(rat_pow(Rat(5), 0) == Rat(1));
  CHECK(rat_pow(Rat(-2, 3), 2) == Rat(4, 9));
  CHECK_THROWS_AS(rat_pow(Rat(0), -1), validation_error);
}

TEST_CASE("rat_abs") {
  CHECK(rat_abs(Rat(-3, 4)) == Rat(3, 4));
  CHECK(rat_abs(Rat(3, 4)) == Rat(3, 4));
}
