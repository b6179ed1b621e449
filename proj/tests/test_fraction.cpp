#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "planner/fraction.hpp"

using planner::Fraction;

TEST_CASE("construction normalizes to lowest terms with positive denominator") {
  CHECK(Fraction(6, 4) == Fraction(3, 2));
  CHECK(Fraction(-6, 4) == Fraction(-3, 2));
  CHECK(Fraction(6, -4) == Fraction(-3, 2));
  CHECK(Fraction(-6, -4) == Fraction(3, 2));
  CHECK(Fraction(0, 5) == Fraction(0));
  CHECK(Fraction(0, 5).denominator() == 1);
  CHECK(Fraction(26, 2).numerator() == 13);
  CHECK(Fraction(26, 2).denominator() == 1);
  CHECK(Fraction(7).is_integer());
  CHECK_FALSE(Fraction(7, 2).is_integer());
}

TEST_CASE("infinity is canonical and participates in ordering") {
  const Fraction inf = Fraction::infinity();
  CHECK(inf.is_infinite());
  CHECK(inf == Fraction(5, 0));
  CHECK(inf == Fraction(123456, 0));
  CHECK(inf > Fraction(INT64_MAX));
  CHECK(Fraction(1, 3) < inf);
  CHECK_FALSE(inf < inf);
  CHECK_THROWS_AS(Fraction(0, 0), std::domain_error);
  CHECK_THROWS_AS(Fraction(-1, 0), std::domain_error);
}

TEST_CASE("exact arithmetic") {
  CHECK(Fraction(1, 3) + Fraction(1, 6) == Fraction(1, 2));
  CHECK(Fraction(2, 3) * Fraction(3, 4) == Fraction(1, 2));
  CHECK(Fraction(7, 2) - Fraction(3, 2) == Fraction(2));
  CHECK(Fraction(3) / Fraction(2) == Fraction(3, 2));
  CHECK(Fraction(5) / Fraction(10) == Fraction(1, 2));
  CHECK(-Fraction(3, 7) == Fraction(-3, 7));

  Fraction acc;
  for (std::int64_t k = 1; k <= 10; ++k) acc += Fraction(1, k);
  CHECK(acc == Fraction(7381, 2520));

  SECTION("compound assignment") {
    Fraction x(1, 5);
    x *= Fraction(10);
    x -= Fraction(1);
    x /= Fraction(2);
    CHECK(x == Fraction(1, 2));
  }
}

TEST_CASE("infinity arithmetic saturates, with inf * 0 == 0") {
  const Fraction inf = Fraction::infinity();
  CHECK((inf + Fraction(3, 2)).is_infinite());
  CHECK((Fraction(3, 2) + inf).is_infinite());
  CHECK((inf * Fraction(2, 7)).is_infinite());
  CHECK(inf * Fraction(0) == Fraction(0));
  CHECK(Fraction(0) * inf == Fraction(0));
  CHECK((inf - Fraction(5)).is_infinite());
  CHECK_THROWS_AS(Fraction(5) - inf, std::domain_error);
  CHECK_THROWS_AS(inf - inf, std::domain_error);
  CHECK(Fraction(3) / inf == Fraction(0));
  CHECK((Fraction(3) / Fraction(0)).is_infinite());
  CHECK_THROWS_AS(Fraction(0) / Fraction(0), std::domain_error);
  CHECK((inf / Fraction(7)).is_infinite());
  CHECK_THROWS_AS(-inf, std::domain_error);
}

TEST_CASE("ceil and floor") {
  CHECK(Fraction(7, 5).ceil_to_integer() == 2);
  CHECK(Fraction(7, 5).floor_to_integer() == 1);
  CHECK(Fraction(3).ceil_to_integer() == 3);
  CHECK(Fraction(3).floor_to_integer() == 3);
  CHECK(Fraction(-7, 5).ceil_to_integer() == -1);
  CHECK(Fraction(-7, 5).floor_to_integer() == -2);
  CHECK(Fraction(0).ceil_to_integer() == 0);
  CHECK(Fraction(187, 15).ceil_to_integer() == 13);
  CHECK(Fraction(31, 2).ceil_to_integer() == 16);
  CHECK_THROWS_AS(Fraction::infinity().ceil_to_integer(), std::domain_error);
}

TEST_CASE("ordering sorts mixed values") {
  std::vector<Fraction> v = {Fraction::infinity(), Fraction(1, 2), Fraction(-2), Fraction(1, 3),
                             Fraction(2)};
  std::sort(v.begin(), v.end());
  CHECK(v == std::vector<Fraction>{Fraction(-2), Fraction(1, 3), Fraction(1, 2), Fraction(2),
                                   Fraction::infinity()});
}

TEST_CASE("narrowing overflow throws instead of wrapping") {
  CHECK_THROWS_AS(Fraction(INT64_MAX) + Fraction(INT64_MAX), std::overflow_error);
  CHECK_THROWS_AS(Fraction(INT64_MAX) * Fraction(2), std::overflow_error);
  // Intermediate 128-bit math keeps large-but-representable results exact.
  CHECK(Fraction(INT64_MAX / 2) + Fraction(INT64_MAX / 2) == Fraction(INT64_MAX - 1));
  CHECK(Fraction(1, INT64_MAX) * Fraction(INT64_MAX) == Fraction(1));
}

TEST_CASE("string rendering") {
  CHECK(Fraction(187, 15).str() == "187/15");
  CHECK(Fraction(26, 2).str() == "13");
  CHECK(Fraction::infinity().str() == "inf");
  CHECK(Fraction(-3, 7).str() == "-3/7");
  std::ostringstream os;
  os << Fraction(31, 2);
  CHECK(os.str() == "31/2");
}
