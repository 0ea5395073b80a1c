#include "doctest.h"
#include "oracles/oracles.hpp"
#include "sciontology/error.hpp"
#include "sciontology/rational.hpp"

using sciontology::Rational;

TEST_SUITE("rational") {
  TEST_CASE("reduction and sign normalization") {
    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(0, 7).den() == 1);
    CHECK_THROWS_AS(Rational(1, 0), sciontology::InvalidArgument);
  }

  TEST_CASE("to_string emits n/d or an integer") {
    CHECK(Rational(9, 2).to_string() == "9/2");
    CHECK(Rational(10, 2).to_string() == "5");
    CHECK(Rational(53, 12).to_string() == "53/12");
  }

  TEST_CASE("two-decimal display rounds half up") {
    CHECK(Rational(53, 12).to_fixed2() == "4.42");  // 4.41666...
    CHECK(Rational(23, 12).to_fixed2() == "1.92");  // 1.91666...
    CHECK(Rational(15, 4).to_fixed2() == "3.75");
    CHECK(Rational(1, 8).to_fixed2() == "0.13");    // 0.125 exactly
    CHECK(Rational(5).to_fixed2() == "5.00");
    CHECK(Rational(0).to_fixed2() == "0.00");
  }

  TEST_CASE("display agrees with the integer oracle for every half-point sum") {
    for (int sum_half = 0; sum_half <= 60; ++sum_half) {
      CAPTURE(sum_half);
      const Rational avg(sum_half, 12);
      CHECK(avg.to_fixed2() == oracle::display(sum_half));
      CHECK(avg.to_string() == oracle::exact(sum_half));
    }
  }

  TEST_CASE("parse accepts fractions, integers and decimals") {
    CHECK(Rational::parse("9/2") == Rational(9, 2));
    CHECK(Rational::parse("4.5") == Rational(9, 2));
    CHECK(Rational::parse("4") == Rational(4));
    CHECK(Rational::parse("0.25") == Rational(1, 4));
    CHECK(Rational::parse("-1.5") == Rational(-3, 2));
    for (const char* bad : {"", "x", "1/", "/2", "1.", "1.2.3", "4/0", "1e3"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS(Rational::parse(bad), sciontology::InvalidArgument);
    }
  }

  TEST_CASE("ordering and arithmetic are exact") {
    CHECK(Rational(9, 2) > Rational(53, 12));
    CHECK(Rational(27, 6) == Rational(9, 2));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 2) - Rational(3, 4) == Rational(-1, 4));
    CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
    CHECK(Rational(1, 2).is_half_step());
    CHECK_FALSE(Rational(1, 3).is_half_step());
  }
}
