#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "shadowlab/error.hpp"
#include "shadowlab/group.hpp"

using namespace shadowlab;

namespace {

std::string random_word(std::mt19937_64& rng, std::string const& letters, std::size_t max_len) {
  std::size_t const len = rng() % (max_len + 1);
  std::string w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(letters[rng() % letters.size()]);
  return w.empty() ? "e" : w;
}

GroupElement random_element(std::mt19937_64& rng, GroupSpec const& spec, std::size_t max_len = 8) {
  std::string letters;
  for (auto const& l : spec.default_generators().labels()) letters += l;
  return evaluate_word(spec, random_word(rng, letters, max_len));
}

std::vector<GroupSpec> families() {
  return {GroupSpec::free_group(2), GroupSpec::free_abelian(2), GroupSpec::heisenberg(),
          GroupSpec::baumslag_solitar(2), GroupSpec::baumslag_solitar(3)};
}

}  // namespace

TEST_SUITE("group") {
  TEST_CASE("presentations") {
    GroupSpec const f2 = parse_presentation("F(2)");
    CHECK(f2.family() == Family::Free);
    CHECK(f2.default_generators().labels() == std::vector<std::string>{"a", "A", "b", "B"});
    GroupSpec const bs = parse_presentation("BS(1,2)");
    CHECK(bs.bs_n() == 2);
    REQUIRE(bs.relations().size() == 1);
    CHECK(evaluate_word(bs, bs.relations()[0].lhs) == evaluate_word(bs, bs.relations()[0].rhs));
    CHECK(evaluate_word(bs, "ba") == evaluate_word(bs, "aab"));
    CHECK(parse_presentation("Z^3").rank() == 3);
    CHECK(parse_presentation("Heis").family() == Family::Heisenberg);
    CHECK_THROWS_AS(parse_presentation("BS(2,3)"), DomainError);
    CHECK_THROWS_AS(parse_presentation("BS(1,1)"), ParseError);
    CHECK_THROWS_AS(parse_presentation("G(2)"), ParseError);
    CHECK_THROWS_AS(parse_presentation("F(2"), ParseError);
    CHECK_THROWS_AS(parse_presentation("F(2)x"), ParseError);
  }

  TEST_CASE("free group words match naive reduction") {
    GroupSpec const spec = GroupSpec::free_group(3);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
      std::string const w = random_word(rng, "aAbBcC", 12);
      std::string const expect = oracle::reduce_free(w);
      CHECK(spell(spec, evaluate_word(spec, w)) == (expect.empty() ? "e" : expect));
    }
    CHECK(is_identity(evaluate_word(spec, "aA")));
    CHECK(spell(spec, inverse(spec, evaluate_word(spec, "abC"))) == "cBA");
  }

  TEST_CASE("Baumslag-Solitar normal forms match affine maps") {
    for (std::int64_t n : {2, 3}) {
      GroupSpec const spec = GroupSpec::baumslag_solitar(n);
      std::mt19937_64 rng(static_cast<std::uint64_t>(n));
      for (int i = 0; i < 300; ++i) {
        std::string const w = random_word(rng, "aAbB", 12);
        BSPair const p = evaluate_word(spec, w).bs_pair();
        oracle::Affine const f = oracle::bs_word(n, w);
        CHECK(f.shift == p.shift);
        CHECK(f.scale == power(Rational(static_cast<long>(n)), p.level));
        CHECK(denominator_is_power_of(p.shift, n));
        // The spelling evaluates back to the same element.
        CHECK(evaluate_word(spec, spell(spec, evaluate_word(spec, w))) == evaluate_word(spec, w));
      }
    }
  }

  TEST_CASE("Heisenberg normal forms match unitriangular matrices") {
    GroupSpec const spec = GroupSpec::heisenberg();
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
      std::string const w = random_word(rng, "aAbBcC", 12);
      HeisenbergTriple const t = evaluate_word(spec, w).heisenberg();
      auto const m = oracle::heis_word(w);
      CHECK(t.a == m[0]);
      CHECK(t.b == m[1]);
      CHECK(t.c == m[2]);
    }
    GroupElement const ab = evaluate_word(spec, "ab");
    GroupElement const bac = evaluate_word(spec, "bac");
    CHECK(ab == bac);
    CHECK(commutator(spec, spec.letter('a'), spec.letter('b')) == spec.letter('c'));
  }

  TEST_CASE("group axioms hold on random elements of every family") {
    std::mt19937_64 rng(17);
    for (auto const& spec : families()) {
      for (int i = 0; i < 100; ++i) {
        GroupElement const g = random_element(rng, spec);
        GroupElement const h = random_element(rng, spec);
        GroupElement const k = random_element(rng, spec);
        CHECK(multiply(spec, multiply(spec, g, h), k) == multiply(spec, g, multiply(spec, h, k)));
        CHECK(is_identity(multiply(spec, g, inverse(spec, g))));
        CHECK(multiply(spec, spec.identity(), g) == g);
        CHECK(is_identity(commutator(spec, g, g)));
        CHECK(power(spec, g, 3) == multiply(spec, g, multiply(spec, g, g)));
        CHECK(power(spec, g, -2) == inverse(spec, multiply(spec, g, g)));
      }
    }
  }

  TEST_CASE("abelian commutators vanish") {
    GroupSpec const spec = GroupSpec::free_abelian(2);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
      CHECK(is_identity(commutator(spec, random_element(rng, spec), random_element(rng, spec))));
    }
  }

  TEST_CASE("BS pair inverse solves the multiplication law") {
    GroupSpec const spec = GroupSpec::baumslag_solitar(2);
    GroupElement const g = parse_element(spec, "(3/4, 2)");
    CHECK(g.bs_pair().shift == Rational(3, 4));
    CHECK(g.bs_pair().level == 2);
    CHECK(is_identity(multiply(spec, g, inverse(spec, g))));
    CHECK_THROWS_AS(parse_element(spec, "(1/3, 0)"), DomainError);
    CHECK_THROWS_AS(parse_element(spec, "(1/2"), ParseError);
    CHECK_THROWS_AS(parse_element(GroupSpec::free_group(2), "(1, 0)"), ParseError);
  }

  TEST_CASE("mixing families is rejected") {
    GroupSpec const f2 = GroupSpec::free_group(2);
    GroupSpec const z2 = GroupSpec::free_abelian(2);
    CHECK_THROWS_AS(multiply(f2, f2.letter('a'), z2.letter('a')), FamilyMismatch);
    CHECK_THROWS_AS(evaluate_word(f2, "ac"), ParseError);
    CHECK_THROWS_AS(evaluate_word(f2, ""), ParseError);
  }

  TEST_CASE("word norms") {
    GroupSpec const f2 = GroupSpec::free_group(2);
    CHECK(word_norm(f2, f2.identity(), f2.default_generators(), 5) == 0);
    CHECK(word_norm(f2, evaluate_word(f2, "abAAB"), f2.default_generators(), 10) == 5);
    CHECK_THROWS_AS(word_norm(f2, evaluate_word(f2, "abAAB"), f2.default_generators(), 3), CapExceeded);

    for (std::int64_t n : {2, 3}) {
      GroupSpec const bs = GroupSpec::baumslag_solitar(n);
      std::mt19937_64 rng(static_cast<std::uint64_t>(40 + n));
      WordMetric metric(bs, bs.default_generators());
      for (int i = 0; i < 40; ++i) {
        std::string const w = random_word(rng, "aAbB", 7);
        auto const expect = oracle::bs_norm(n, oracle::bs_word(n, w), 8);
        REQUIRE(expect);
        CHECK(metric.norm(evaluate_word(bs, w), 8) == *expect);
      }
    }
    GroupSpec const bs2 = GroupSpec::baumslag_solitar(2);
    int const a4 = word_norm(bs2, evaluate_word(bs2, "aaaa"), bs2.default_generators(), 8);
    CHECK(a4 == *oracle::bs_norm(2, oracle::bs_word(2, "aaaa"), 8));
    CHECK(a4 <= 4);
  }

  TEST_CASE("ball sizes match closed forms and independent BFS") {
    GroupSpec const f2 = GroupSpec::free_group(2);
    for (int r = 0; r <= 6; ++r) {
      auto const b = ball(f2, f2.default_generators(), r);
      CHECK(b.size() == static_cast<std::size_t>(2 * std::pow(3, r) - 1));
      CHECK(b.size() == oracle::free_ball_size(2, r));
    }
    GroupSpec const z2 = GroupSpec::free_abelian(2);
    for (int r = 0; r <= 12; ++r) {
      auto const b = ball(z2, z2.default_generators(), r);
      CHECK(b.size() == static_cast<std::size_t>(2 * r * r + 2 * r + 1));
      CHECK(b.size() == oracle::abelian_ball_size(2, r));
    }
  }

  TEST_CASE("ball structure: order, parents, neighbors, spellings") {
    for (auto const& spec : families()) {
      auto const b = ball(spec, spec.default_generators(), 3);
      auto const bigger = ball(spec, spec.default_generators(), 4);
      auto const& gens = b.generators();
      CHECK(is_identity(b.element(0)));
      for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(bigger.element(i) == b.element(i));
        if (i > 0) {
          CHECK(b.norm(i - 1) <= b.norm(i));
          auto const p = b.parent(i);
          CHECK(multiply(spec, gens[p.generator].element, b.element(p.parent)) == b.element(i));
          CHECK(b.norm(p.parent) + 1 == b.norm(i));
        }
        CHECK(evaluate_word(spec, b.word(i)) == b.element(i));
        CHECK(b.spelling(i).size() == static_cast<std::size_t>(b.norm(i)));
        for (std::size_t s = 0; s < gens.size(); ++s) {
          auto const j = b.index_of(multiply(spec, gens[s].element, b.element(i)));
          CHECK(b.neighbor(i, s) == (j ? *j : CayleyBall::npos));
        }
      }
    }
  }

  TEST_CASE("ball cap and bad radius") {
    GroupSpec const f2 = GroupSpec::free_group(2);
    CHECK_THROWS_AS(ball(f2, f2.default_generators(), 6, 100), CapExceeded);
    CHECK_THROWS_AS(ball(f2, f2.default_generators(), -1), DomainError);
  }

  TEST_CASE("generating sets must be symmetric and nontrivial") {
    GroupSpec const f2 = GroupSpec::free_group(2);
    CHECK_THROWS_AS(GeneratingSet::from_words(f2, {"a", "A", "ab"}), DomainError);
    CHECK_THROWS_AS(GeneratingSet::from_words(f2, {"a", "A", "aA"}), DomainError);
    auto const s = GeneratingSet::from_words(f2, {"a", "A", "b", "B", "ab", "BA"});
    CHECK(s.size() == 6);
    CHECK(s[s.inverse_index(4)].label == "BA");
  }

  TEST_CASE("bilipschitz constants") {
    GroupSpec const f2 = GroupSpec::free_group(2);
    auto const s = f2.default_generators();
    BilipschitzReport const same = bilipschitz_constant(f2, s, s, 4);
    CHECK(same.constant == 1);
    CHECK(same.verified);

    auto const sp = GeneratingSet::from_words(f2, {"a", "A", "b", "B", "ab", "BA"});
    BilipschitzReport const rep = bilipschitz_constant(f2, s, sp, 8);
    CHECK(rep.constant == 2);
    CHECK(rep.verified);
    CHECK(rep.checked == static_cast<std::size_t>(2 * 6561 - 1));
    // The witness needs twice as many S-letters as S'-letters.
    CHECK(rep.witness_norm == 2 * rep.witness_other_norm);

    GroupSpec const bs = GroupSpec::baumslag_solitar(2);
    auto const bsp = GeneratingSet::from_words(bs, {"a", "A", "b", "B", "ab", "BA"});
    BilipschitzReport const brep = bilipschitz_constant(bs, bs.default_generators(), bsp, 6);
    CHECK(brep.verified);
    CHECK(brep.constant >= 1);
    CHECK(brep.constant <= 2);
  }
}
