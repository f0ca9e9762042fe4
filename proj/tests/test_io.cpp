#include <doctest.h>

#include <sstream>

#include "shadowlab/error.hpp"
#include "shadowlab/io.hpp"

using namespace shadowlab;

namespace {

BallPtr make_ball(GroupSpec const& spec, int radius) {
  return std::make_shared<CayleyBall const>(ball(spec, spec.default_generators(), radius));
}

std::string to_text(Pseudotrajectory const& y, LinearAction const& action) {
  std::ostringstream out;
  write_trajectory(out, y, action);
  return out.str();
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("exact trajectories round-trip bit for bit") {
    LinearAction const action = bs_action(2, 3);
    Pseudotrajectory const y =
        perturbed_orbit(action, make_ball(action.spec(), 3), Point{Rational(1), Rational(1)}, Rational(1, 100), 8);
    std::string const text = to_text(y, action);
    std::istringstream in(text);
    LoadedTrajectory const back = read_trajectory(in);
    CHECK(back.trajectory == y);
    CHECK(back.action.matrices() == action.matrices());
    CHECK(to_text(back.trajectory, back.action) == text);
  }

  TEST_CASE("float trajectories round-trip their enclosures") {
    LinearAction const action = bs_action(3, 2);
    Pseudotrajectory const y =
        bs_counterexample({3, 2, Rational(1, 10), NumericMode::Float, 160}, make_ball(action.spec(), 2));
    std::string const text = to_text(y, action);
    std::istringstream in(text);
    LoadedTrajectory const back = read_trajectory(in);
    REQUIRE(back.trajectory.mode() == NumericMode::Float);
    CHECK(back.trajectory.precision() == 160);
    for (std::size_t i = 0; i < y.size(); ++i) {
      for (std::size_t c = 0; c < 2; ++c) {
        CHECK(back.trajectory.interval_point(i)[c].lower_rational() == y.interval_point(i)[c].lower_rational());
        CHECK(back.trajectory.interval_point(i)[c].upper_rational() == y.interval_point(i)[c].upper_rational());
      }
    }
    CHECK(to_text(back.trajectory, back.action) == text);
  }

  TEST_CASE("records may come in any order") {
    LinearAction const action = load_action(GroupSpec::free_abelian(1), {{"a", Matrix::diagonal({2})}});
    std::istringstream in(
        "#{\"action\":{\"group\":\"Z^1\",\"matrices\":{\"a\":[[\"2\"]]}},\"generators\":[\"a\",\"A\"],"
        "\"radius\":1,\"mode\":\"exact\",\"declared_d\":\"0\"}\nA\t1/2\ne\t1\na\t2\n");
    LoadedTrajectory const back = read_trajectory(in);
    CHECK(max_defect(back.trajectory, back.action).value == 0);
    CHECK(back.trajectory.point(0) == Point{Rational(1)});
  }

  TEST_CASE("malformed files are rejected") {
    std::string const header =
        "#{\"action\":{\"group\":\"Z^1\",\"matrices\":{\"a\":[[\"2\"]]}},\"generators\":[\"a\",\"A\"],"
        "\"radius\":1,\"mode\":\"exact\",\"declared_d\":\"0\"}\n";
    auto parse = [](std::string const& text) {
      std::istringstream in(text);
      return read_trajectory(in);
    };
    CHECK_THROWS_AS(parse("e\t1\n"), ParseError);
    CHECK_THROWS_AS(parse("#{not json\n"), ParseError);
    CHECK_THROWS_AS(parse(header + "e\t1\na\t2\n"), ParseError);                  // missing A
    CHECK_THROWS_AS(parse(header + "e\t1\na\t2\nA\t1/2\ne\t1\n"), ParseError);    // duplicate
    CHECK_THROWS_AS(parse(header + "e\t1\na\t2\nA\t1/2\naa\t4\n"), ParseError);   // outside the ball
    CHECK_THROWS_AS(parse(header + "e\t1\na\tx\nA\t1/2\n"), ParseError);          // bad rational
    CHECK_THROWS_AS(parse(header + "e\t1\t2\na\t2\nA\t1/2\n"), ParseError);       // wrong arity
  }

  TEST_CASE("actions and verdicts as JSON") {
    LinearAction const action = bs_action(2, 3);
    Json const j = action_to_json(action);
    CHECK(j["group"] == "BS(1,2)");
    CHECK(j["matrices"]["b"][1][1] == "6");
    CHECK(action_from_json(j).matrices() == action.matrices());
    Json bad = j;
    bad["matrices"]["b"] = Json::array({Json::array({"3", "0"}), Json::array({"0", "5"})});
    CHECK_THROWS_AS(action_from_json(bad), RelationViolation);
    CHECK_THROWS_AS(matrix_from_json(Json::array({Json::array({"1", "2"})})), ParseError);
    CHECK(point_from_json(point_to_json(Point{Rational(1, 3), Rational(-2)})) == Point{Rational(1, 3), Rational(-2)});
  }
}
