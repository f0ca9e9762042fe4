#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "shadowlab/error.hpp"
#include "shadowlab/shadow.hpp"

using namespace shadowlab;

namespace {

BallPtr make_ball(GroupSpec const& spec, int radius) {
  return std::make_shared<CayleyBall const>(ball(spec, spec.default_generators(), radius));
}

Rational rat(std::mt19937_64& rng, long range, unsigned long den) {
  Rational q(static_cast<long>(rng() % static_cast<std::uint64_t>(2 * range + 1)) - range, den);
  q.canonicalize();
  return q;
}

// Box |x| <= 1, |y| <= 1 followed by `extra` random half-planes; some are
// axis-aligned or parallel to earlier ones to exercise degenerate polygons.
std::vector<HalfPlane> random_system(std::mt19937_64& rng, std::size_t extra) {
  std::vector<HalfPlane> hs{{1, 0, 1, "", 0, 0, 1}, {-1, 0, 1, "", 0, 0, -1}, {0, 1, 1, "", 0, 1, 1},
                            {0, -1, 1, "", 0, 1, -1}};
  for (std::size_t i = 0; i < extra; ++i) {
    HalfPlane h;
    switch (rng() % 4) {
      case 0:
        h.a = rat(rng, 3, 1);
        h.b = 0;
        break;
      case 1:
        h.a = 0;
        h.b = rat(rng, 3, 1);
        break;
      case 2: {
        HalfPlane const& prev = hs[rng() % hs.size()];
        h.a = -prev.a;
        h.b = -prev.b;
        break;
      }
      default:
        h.a = rat(rng, 4, 2);
        h.b = rat(rng, 4, 3);
    }
    if (h.a == 0 && h.b == 0) h.a = 1;
    h.c = rat(rng, 6, 4);
    hs.push_back(h);
  }
  return hs;
}

}  // namespace

TEST_SUITE("shadow") {
  TEST_CASE("identity ball gives the unit box") {
    LinearAction const action = bs_action(2, 3);
    auto const b = make_ball(action.spec(), 0);
    Pseudotrajectory const y(b, {Point{Rational(0), Rational(0)}}, 0);
    ShadowingProblem const problem(action, y, 1);
    auto const hs = shadow_constraints(problem);
    REQUIRE(hs.size() == 4);
    FeasibilityVerdict const v = feasible_shadow(problem);
    CHECK(v.feasible);
    CHECK(v.region_vertices == 4);
    CHECK(*v.witness == Point{Rational(-1), Rational(-1)});
    CHECK(*v.strict_witness == Point{Rational(0), Rational(0)});
  }

  TEST_CASE("constraints pull the box back through f_g") {
    LinearAction const action = bs_action(2, 3);
    GroupSpec const& spec = action.spec();
    auto const b = make_ball(spec, 1);
    Pseudotrajectory const y = exact_orbit(action, b, Point{Rational(1), Rational(1)});
    ShadowingProblem const problem(action, y, Rational(1, 10));
    auto const hs = shadow_constraints(problem);
    CHECK(hs.size() == 4 * b->size());
    std::size_t const ib = *b->index_of(spec.letter('b'));
    int seen = 0;
    for (auto const& h : hs) {
      if (h.index != ib) continue;
      ++seen;
      if (h.coordinate == 0) {
        CHECK(h.a == 3 * h.side);
        CHECK(h.b == 0);
        CHECK(h.c == (h.side > 0 ? Rational(31, 10) : Rational(-29, 10)));
      } else {
        CHECK(h.a == 0);
        CHECK(h.b == 6 * h.side);
      }
      CHECK(h.element == "b");
    }
    CHECK(seen == 4);
  }

  TEST_CASE("exact orbits are shadowed by their start") {
    LinearAction const action = bs_action(2, 3);
    auto const b = make_ball(action.spec(), 5);
    Point const x0{Rational(1), Rational(1)};
    ShadowingProblem const problem(action, exact_orbit(action, b, x0), Rational(1, 1000));
    auto const hs = shadow_constraints(problem);
    FeasibilityVerdict const v = feasible_region(hs, 2);
    CHECK(v.feasible);
    CHECK(verify_witness(hs, *v.witness));
    CHECK(verify_witness(hs, x0));
    REQUIRE(v.strict_witness);
    for (auto const& h : hs) CHECK(h.strictly_satisfied(*v.strict_witness));
  }

  TEST_CASE("counterexample is infeasible with a small certificate") {
    CounterexampleParams const params{2, 2, Rational(1, 10), NumericMode::Exact, Interval::kDefaultPrecision};
    LinearAction const action = bs_action(2, 2);
    auto const b = make_ball(action.spec(), 8);
    ShadowingProblem const problem(action, bs_counterexample(params, b), 1);
    auto const hs = shadow_constraints(problem);
    FeasibilityVerdict const v = feasible_region(hs, 2);
    CHECK_FALSE(v.feasible);
    CHECK(v.certificate.size() <= 3);
    CHECK(verify_certificate(v.certificate, 2));
    CHECK(verify_multipliers(v.certificate, v.multipliers));
    CHECK_FALSE(oracle::lp_feasible(v.certificate, 2));
    bool uses_b_power = false;
    for (auto const& h : v.certificate) uses_b_power = uses_b_power || h.element.find('b') != std::string::npos;
    CHECK(uses_b_power);
  }

  TEST_CASE("random 2D systems agree with vertex enumeration") {
    std::mt19937_64 rng(101);
    int feasible = 0;
    int infeasible = 0;
    for (int t = 0; t < 600; ++t) {
      auto const hs = random_system(rng, rng() % 12);
      FeasibilityVerdict const v = feasible_region(hs, 2);
      auto const ref = oracle::lp_feasible(hs, 2);
      CHECK(v.feasible == ref.has_value());
      if (v.feasible) {
        ++feasible;
        CHECK(verify_witness(hs, *v.witness));
        if (v.strict_witness) {
          for (auto const& h : hs) CHECK(h.strictly_satisfied(*v.strict_witness));
        }
      } else {
        ++infeasible;
        CHECK(v.certificate.size() <= 3);
        CHECK(verify_certificate(v.certificate, 2));
        CHECK(verify_multipliers(v.certificate, v.multipliers));
      }
    }
    CHECK(feasible > 50);
    CHECK(infeasible > 50);
  }

  TEST_CASE("a region squeezed to one point is feasible without a strict witness") {
    std::vector<HalfPlane> hs{{1, 0, 1, "", 0, 0, 1},  {-1, 0, 1, "", 0, 0, -1}, {0, 1, 1, "", 0, 1, 1},
                              {0, -1, 1, "", 0, 1, -1}, {1, 1, 0, "", 0, 0, 1},  {-1, 0, 0, "", 0, 0, -1},
                              {0, -1, 0, "", 0, 1, -1}};
    FeasibilityVerdict const v = feasible_region(hs, 2);
    CHECK(v.feasible);
    CHECK(*v.witness == Point{Rational(0), Rational(0)});
    CHECK_FALSE(v.strict_witness);
  }

  TEST_CASE("one-dimensional systems") {
    GroupSpec const z = GroupSpec::free_abelian(1);
    LinearAction const action = load_action(z, {{"a", Matrix::diagonal({2})}});
    auto const b = make_ball(z, 4);
    Pseudotrajectory const y = perturbed_orbit(action, b, Point{Rational(1)}, Rational(1, 10), 3);
    ShadowingProblem const problem(action, y, Rational(1, 10));
    auto const hs = shadow_constraints(problem);
    CHECK(hs.size() == 2 * b->size());
    FeasibilityVerdict const v = feasible_region(hs, 1);
    CHECK(v.feasible == oracle::lp_feasible(hs, 1).has_value());
    if (v.feasible) CHECK(verify_witness(hs, *v.witness));

    std::vector<Point> pts;
    for (std::size_t i = 0; i < b->size(); ++i) pts.push_back(Point{Rational(static_cast<long>(i % 2))});
    ShadowingProblem const bad(action, Pseudotrajectory(b, pts, 1), Rational(1, 10));
    FeasibilityVerdict const w = feasible_shadow(bad);
    CHECK_FALSE(w.feasible);
    CHECK(verify_certificate(w.certificate, 1));
    CHECK(verify_multipliers(w.certificate, w.multipliers));
  }

  TEST_CASE("independent certificate check rejects non-certificates") {
    HalfPlane const x_le_1{1, 0, 1, "", 0, 0, 1};
    HalfPlane const x_ge_0{-1, 0, 0, "", 0, 0, -1};
    HalfPlane const x_ge_2{-1, 0, -2, "", 0, 0, -1};
    CHECK(verify_certificate({x_le_1, x_ge_2}, 2));
    CHECK_FALSE(verify_certificate({x_le_1, x_ge_0}, 2));
    CHECK_FALSE(verify_certificate({x_le_1}, 2));
    // x + y <= -1, x >= 0, y >= 0.
    HalfPlane const diag{1, 1, -1, "", 0, 0, 1};
    HalfPlane const y_ge_0{0, -1, 0, "", 0, 1, -1};
    CHECK(verify_certificate({diag, x_ge_0, y_ge_0}, 2));
    CHECK(verify_multipliers({diag, x_ge_0, y_ge_0}, {1, 1, 1}));
    CHECK_FALSE(verify_multipliers({diag, x_ge_0, y_ge_0}, {1, 1, 2}));
    CHECK_FALSE(verify_multipliers({diag, x_ge_0, y_ge_0}, {-1, -1, -1}));
  }

  TEST_CASE("grid oracle") {
    LinearAction const action = bs_action(2, 3);
    auto const b = make_ball(action.spec(), 3);
    Point const x0{Rational(1), Rational(1)};
    ShadowingProblem const problem(action, exact_orbit(action, b, x0), Rational(1, 100));
    Box const box{{Rational(1, 2), Rational(1, 2)}, {Rational(3, 2), Rational(3, 2)}};
    auto const hit = grid_oracle(problem, Rational(1, 4), box);
    REQUIRE(hit);
    CHECK(*hit == x0);
    CHECK_THROWS_AS(grid_oracle(problem, Rational(1, 10000), box, 1000), CapExceeded);
    CHECK_THROWS_AS(grid_oracle(problem, 0, box), DomainError);
  }

  TEST_CASE("fiber boxes") {
    Matrix const b = Matrix::diagonal({3, 6});
    std::vector<Point> zeros(6, Point{Rational(0), Rational(0)});
    Box const box = fiber_shadow_expanding(b, zeros, 1);
    CHECK(box.lo == std::vector<Rational>{Rational(-1, 243), Rational(-1, 7776)});
    CHECK(box.hi == std::vector<Rational>{Rational(1, 243), Rational(1, 7776)});
    CHECK(box.width() == Rational(2, 243));

    Point const x{Rational(2, 5), Rational(-7, 3)};
    std::vector<Point> orbit;
    for (int k = 0; k <= 8; ++k) orbit.push_back(power(b, k) * x);
    for (std::size_t len = 1; len <= orbit.size(); ++len) {
      Box const bx = fiber_shadow_expanding(b, {orbit.begin(), orbit.begin() + static_cast<long>(len)}, Rational(1, 7));
      CHECK(bx.contains(x));
    }
    std::vector<Point> clash{Point{Rational(0), Rational(0)}, Point{Rational(30), Rational(0)}};
    CHECK(fiber_shadow_expanding(b, clash, 1).empty());
    CHECK_THROWS_AS(fiber_shadow_expanding(Matrix::diagonal({2, Rational(1, 2)}), zeros, 1), DomainError);
    CHECK_THROWS_AS(fiber_shadow_expanding(Matrix(2, {2, 1, 0, 2}), zeros, 1), DomainError);

    Matrix const saddle = Matrix::diagonal({2, Rational(1, 2)});
    ZWindow w{-3, {}};
    for (int k = -3; k <= 3; ++k) w.points.push_back(power(saddle, k) * x);
    Box const hb = fiber_shadow_hyperbolic(saddle, w, Rational(1, 100));
    CHECK(hb.contains(x));
    CHECK(hb.width() == Rational(2, 100) / 8);
    CHECK_THROWS_AS(fiber_shadow_hyperbolic(Matrix::diagonal({1, 2}), w, 1), DomainError);
  }

  TEST_CASE("coherence of fibers") {
    GroupSpec const z2 = GroupSpec::free_abelian(2);
    LinearAction const action = load_action(
        z2, {{"a", Matrix::diagonal({2, Rational(1, 2)})}, {"b", Matrix::diagonal({3, Rational(1, 3)})}});
    auto const b = make_ball(z2, 2);
    Pseudotrajectory const y = exact_orbit(action, b, Point{Rational(1), Rational(1)});
    CoherenceReport const ok = coherence_check(action, *b, y.points());
    CHECK(ok.value == 0);
    CHECK(ok.edges > 0);
    std::vector<Point> broken = y.points();
    std::size_t const target = 5;
    broken[target][0] += 1;
    CoherenceReport const bad = coherence_check(action, *b, broken);
    REQUIRE(bad.worst);
    CHECK((bad.worst->from == target || bad.worst->to == target));
    CHECK_THROWS_AS(coherence_check(action, *b, {}), DomainError);
  }

  TEST_CASE("problem preconditions") {
    LinearAction const action = bs_action(2, 3);
    auto const b = make_ball(action.spec(), 1);
    Pseudotrajectory const y = exact_orbit(action, b, Point{Rational(1), Rational(1)});
    CHECK_THROWS_AS(ShadowingProblem(action, y, 0), DomainError);
    CHECK_THROWS_AS(ShadowingProblem(action, y, -1), DomainError);
    CHECK_THROWS_AS(ShadowingProblem(bs_action(3, 4), y, 1), FamilyMismatch);
    auto const fl = bs_counterexample({2, 2, Rational(1, 10), NumericMode::Float, 64},
                                      make_ball(GroupSpec::baumslag_solitar(2), 1));
    CHECK_THROWS_AS(ShadowingProblem(bs_action(2, 2), fl, 1), DomainError);
    std::vector<HalfPlane> few{{1, 0, 1, "", 0, 0, 1}};
    CHECK_THROWS_AS(feasible_region(few, 2), DomainError);
    CHECK_THROWS_AS(feasible_region(few, 3), DomainError);
  }
}
