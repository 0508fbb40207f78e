#include <doctest.h>

#include "hgcalc/rational.hpp"

using namespace hgcalc;

TEST_CASE("rational arithmetic and normalization") {
    Rational a(2, 4);
    CHECK(a.str() == "1/2");
    CHECK((a + Rational(1, 2)).str() == "1");
    CHECK((Rational(2, 3) * Rational(3, 4)).str() == "1/2");
    CHECK((Rational(-4, 8)).str() == "-1/2");
    CHECK(Rational(0).is_zero());
    CHECK(Rational::from_string("7/21").str() == "1/3");
    CHECK(Rational::from_string("-3").str() == "-3");
    CHECK_THROWS(Rational(1, 0));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK((Rational(1, 3) / Rational(1, 3)).str() == "1");
}
