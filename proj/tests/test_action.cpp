#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "shadowlab/action.hpp"
#include "shadowlab/pseudo.hpp"

using namespace shadowlab;

TEST_SUITE("action") {
  TEST_CASE("relations are checked exactly when loading") {
    GroupSpec const bs = GroupSpec::baumslag_solitar(2);
    CHECK_NOTHROW(load_action(bs, {{"a", Matrix(2, {1, 0, 1, 1})}, {"b", Matrix::diagonal({3, 6})}}));
    CHECK_THROWS_AS(load_action(bs, {{"a", Matrix(2, {1, 0, 1, 1})}, {"b", Matrix::diagonal({3, 5})}}),
                    RelationViolation);
    try {
      load_action(bs, {{"a", Matrix(2, {1, 0, 1, 1})}, {"b", Matrix::diagonal({3, 5})}});
    } catch (RelationViolation const& e) {
      bool nonzero = false;
      for (auto const& r : e.residual()) nonzero = nonzero || r != 0;
      CHECK(nonzero);
    }
    GroupSpec const f2 = GroupSpec::free_group(2);
    CHECK_NOTHROW(load_action(f2, {{"a", Matrix(2, {2, 1, 1, 1})}, {"b", Matrix(2, {0, 1, -1, 0})}}));
    CHECK_THROWS_AS(load_action(f2, {{"a", Matrix::identity(2)}}), DomainError);
    CHECK_THROWS_AS(load_action(f2, {{"a", Matrix::identity(2)}, {"b", Matrix::identity(1)}}), DomainError);
    GroupSpec const heis = GroupSpec::heisenberg();
    // c must be the commutator of a and b.
    CHECK_THROWS_AS(load_action(heis, {{"a", Matrix(2, {1, 1, 0, 1})},
                                       {"b", Matrix(2, {1, 0, 1, 1})},
                                       {"c", Matrix::identity(2)}}),
                    RelationViolation);
    CHECK_NOTHROW(load_action(heis, {{"a", Matrix::diagonal({2, 3})},
                                     {"b", Matrix::diagonal({5, 7})},
                                     {"c", Matrix::identity(2)}}));
  }

  TEST_CASE("closed forms for powers of the Baumslag-Solitar matrices") {
    LinearAction const action = bs_action(2, 3);
    GroupSpec const& spec = action.spec();
    Point const x{Rational(2, 7), Rational(-1, 3)};
    CHECK(apply(action, spec.identity(), x) == x);
    for (int r = -4; r <= 4; ++r) {
      Point const ya = apply(action, power(spec, spec.letter('a'), r), x);
      CHECK(ya == Point{x[0], r * x[0] + x[1]});
      Point const yb = apply(action, power(spec, spec.letter('b'), r), x);
      CHECK(yb == Point{power(Rational(3), r) * x[0], power(Rational(6), r) * x[1]});
    }
    CHECK(apply(action, spec.letter('b'), Point{Rational(1), Rational(1)}) == Point{Rational(3), Rational(6)});
  }

  TEST_CASE("matrices compose along words and match the ball propagation") {
    LinearAction const action = bs_action(2, 3);
    GroupSpec const& spec = action.spec();
    auto const b = ball(spec, spec.default_generators(), 4);
    auto const ms = ball_matrices(action, b);
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(ms[i] == matrix_of(action, b.element(i)));
      CHECK(ms[i] == word_matrix(action, b.word(i)));
    }
    // A huge shift stays cheap through the pair spelling.
    GroupElement const big = power(spec, spec.letter('a'), 1'000'000);
    CHECK(matrix_of(action, big) == Matrix(2, {1, 0, 1'000'000, 1}));
  }

  TEST_CASE("the action is a homomorphism on random words") {
    GroupSpec const f2 = GroupSpec::free_group(2);
    LinearAction const action =
        load_action(f2, {{"a", Matrix(2, {2, 1, 1, 1})}, {"b", Matrix(2, {1, 2, 0, 1})}});
    std::mt19937_64 rng(9);
    std::string const letters = "aAbB";
    for (int i = 0; i < 100; ++i) {
      std::string u, v;
      for (std::size_t k = rng() % 6 + 1; k > 0; --k) u.push_back(letters[rng() % 4]);
      for (std::size_t k = rng() % 6 + 1; k > 0; --k) v.push_back(letters[rng() % 4]);
      GroupElement const g = evaluate_word(f2, u);
      GroupElement const h = evaluate_word(f2, v);
      CHECK(matrix_of(action, multiply(f2, g, h)) == matrix_of(action, g) * matrix_of(action, h));
    }
  }

  TEST_CASE("auxiliary action on R x Z") {
    std::int64_t const n = 2;
    GroupSpec const spec = GroupSpec::baumslag_solitar(n);
    AuxState const origin{0, 0};
    CHECK(aux_apply(n, spec.identity(), origin) == origin);
    CHECK(aux_apply(n, spec.letter('a'), origin) == AuxState{1, 0});
    std::mt19937_64 rng(21);
    GroupElement const ba = evaluate_word(spec, "ba");
    GroupElement const aab = evaluate_word(spec, "aab");
    for (int i = 0; i < 100; ++i) {
      Rational x(static_cast<long>(rng() % 2001) - 1000, static_cast<unsigned long>(rng() % 64 + 1));
      x.canonicalize();
      AuxState const s{x, static_cast<std::int64_t>(rng() % 11) - 5};
      CHECK(aux_apply(n, ba, s) == aux_apply(n, aab, s));
      // Closed form agrees with letter-by-letter evaluation (rightmost first).
      std::string w;
      for (std::size_t k = rng() % 6 + 1; k > 0; --k) w.push_back("aAbB"[rng() % 4]);
      AuxState step = s;
      for (auto it = w.rbegin(); it != w.rend(); ++it) step = aux_step(n, *it, step);
      CHECK(aux_apply(n, evaluate_word(spec, w), s) == step);
    }
  }

  TEST_CASE("hyperbolicity classification") {
    CHECK(hyperbolic_type(Matrix::diagonal({3, 6})).type == HyperbolicType::Expanding);
    CHECK(hyperbolic_type(Matrix(2, {1, 0, 1, 1})).type == HyperbolicType::Nonhyperbolic);
    CHECK(hyperbolic_type(Matrix::diagonal({Rational(1, 2), Rational(1, 3)})).type == HyperbolicType::Contracting);
    Hyperbolicity const saddle = hyperbolic_type(Matrix::diagonal({2, Rational(1, 2)}));
    CHECK(saddle.type == HyperbolicType::Saddle);
    CHECK(saddle.spectral_gap == 2);
    REQUIRE(saddle.unstable.size() == 1);
    REQUIRE(saddle.stable.size() == 1);
    CHECK(saddle.unstable[0][1] == 0);
    CHECK(saddle.stable[0][0] == 0);
    // Eigenpairs satisfy M v = lambda v.
    Matrix const m(2, {2, 1, 0, 3});
    for (auto const& e : hyperbolic_type(m).eigenpairs) CHECK(m * e.vector == e.value * e.vector);
    CHECK_THROWS_AS(hyperbolic_type(Matrix(2, {1, 1, 1, 2})), DomainError);
  }
}
