#include <doctest.h>

#include <random>

#include "shadowlab/error.hpp"
#include "shadowlab/linalg.hpp"
#include "shadowlab/rational.hpp"

using namespace shadowlab;

TEST_SUITE("rational") {
  TEST_CASE("parse and format round-trip canonically") {
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(format(parse_rational("6/4")) == "3/2");
    CHECK(format(parse_rational("-10/5")) == "-2");
    CHECK(format(parse_rational("0/7")) == "0");
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
      long const num = static_cast<long>(rng() % 2001) - 1000;
      unsigned long const den = rng() % 999 + 1;
      Rational q(num, den);
      q.canonicalize();
      CHECK(parse_rational(format(q)) == q);
    }
  }

  TEST_CASE("malformed rationals are rejected") {
    for (char const* bad : {"", "1/0", "a", "1/", "/2", "1.5", "1/-2", "--1"}) {
      CHECK_THROWS_AS(parse_rational(bad), ParseError);
    }
  }

  TEST_CASE("power handles negative exponents") {
    CHECK(power(Rational(2, 3), 3) == Rational(8, 27));
    CHECK(power(Rational(2, 3), -2) == Rational(9, 4));
    CHECK(power(Rational(-2), -3) == Rational(-1, 8));
    CHECK(power(Rational(5), 0) == 1);
  }

  TEST_CASE("denominators that are powers of n") {
    CHECK(denominator_is_power_of(Rational(3, 8), 2));
    CHECK(denominator_is_power_of(Rational(-5), 2));
    CHECK_FALSE(denominator_is_power_of(Rational(1, 6), 2));
    CHECK(denominator_is_power_of(Rational(1, 81), 3));
  }
}

TEST_SUITE("linalg") {
  TEST_CASE("sup-norm distance") {
    Point const p{Rational(1), Rational(-3, 2)};
    Point const q{Rational(1, 2), Rational(1)};
    CHECK(sup_norm(p) == Rational(3, 2));
    CHECK(dist(p, q) == Rational(5, 2));
    CHECK(dist(p, p) == 0);
  }

  TEST_CASE("inverse, determinant and powers agree") {
    Matrix const m(2, {2, 1, 1, 1});
    CHECK(m.determinant() == 1);
    CHECK(m * m.inverse() == Matrix::identity(2));
    CHECK(power(m, 3) == m * m * m);
    CHECK(power(m, -2) == m.inverse() * m.inverse());
    CHECK(power(m, 0) == Matrix::identity(2));
  }

  TEST_CASE("singular or malformed matrices are rejected") {
    CHECK_THROWS_AS(Matrix(2, {1, 2, 2, 4}), DomainError);
    CHECK_THROWS_AS(Matrix(2, {1, 2, 3}), DomainError);
  }

  TEST_CASE("operator norm is the max absolute row sum and bounds the action") {
    Matrix const m(2, {1, -3, Rational(1, 2), 2});
    CHECK(m.operator_norm() == 4);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
      Rational x1(static_cast<long>(rng() % 201) - 100, 17);
      Rational x2(static_cast<long>(rng() % 201) - 100, 13);
      x1.canonicalize();
      x2.canonicalize();
      Point const x{x1, x2};
      CHECK(sup_norm(m * x) <= m.operator_norm() * sup_norm(x));
    }
  }

  TEST_CASE("diagonal and triangular predicates") {
    CHECK(Matrix::diagonal({2, Rational(1, 2)}).is_diagonal());
    CHECK(Matrix(2, {1, 0, 1, 1}).is_lower_triangular());
    CHECK_FALSE(Matrix(2, {1, 0, 1, 1}).is_upper_triangular());
  }
}
