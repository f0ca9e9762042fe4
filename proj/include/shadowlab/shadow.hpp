#pragma once

// Exact epsilon-shadowing feasibility for finite windows. With the sup-norm,
// dist(y_g, f_g(x)) <= eps is 2*dim linear constraints on x, so the set of
// admissible shadowing points is a convex polygon (or interval) computed by
// exact clipping. The closed system is decided; strictly feasible points are
// reported separately.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "shadowlab/action.hpp"
#include "shadowlab/pseudo.hpp"

namespace shadowlab {

// a x + b y <= c (dimension 1: a x <= c, b = 0).
struct HalfPlane {
  Rational a;
  Rational b;
  Rational c;
  // Provenance: the ball element g, the coordinate of f_g(x) and the side
  // (+1 for the upper bound y + eps, -1 for the lower bound y - eps).
  std::string element;
  std::size_t index = 0;
  std::size_t coordinate = 0;
  int side = 1;

  Rational lhs(Point const& x) const;
  bool satisfied(Point const& x) const { return lhs(x) <= c; }
  bool strictly_satisfied(Point const& x) const { return lhs(x) < c; }
};

class ShadowingProblem {
 public:
  // Throws DomainError unless eps > 0, the trajectory is exact and its
  // dimension matches the action (1 or 2).
  ShadowingProblem(LinearAction action, Pseudotrajectory trajectory, Rational epsilon);

  LinearAction const& action() const noexcept { return action_; }
  Pseudotrajectory const& trajectory() const noexcept { return trajectory_; }
  Rational const& epsilon() const noexcept { return epsilon_; }
  std::size_t dim() const noexcept { return action_.dim(); }

 private:
  LinearAction action_;
  Pseudotrajectory trajectory_;
  Rational epsilon_;
};

// 2*dim half-planes per ball element, in ball order (word norm, then normal form).
std::vector<HalfPlane> shadow_constraints(ShadowingProblem const& problem);

struct FeasibilityVerdict {
  bool feasible = false;
  // Lexicographically smallest vertex of the admissible region.
  std::optional<Point> witness;
  // A point satisfying every constraint strictly, when one exists.
  std::optional<Point> strict_witness;
  // At most 3 half-planes with empty intersection, and nonnegative multipliers
  // m with sum m_i (a_i, b_i) = 0 and sum m_i c_i < 0.
  std::vector<HalfPlane> certificate;
  std::vector<Rational> multipliers;
  std::size_t constraints = 0;
  std::size_t region_vertices = 0;
};

FeasibilityVerdict feasible_shadow(ShadowingProblem const& problem);

// Same decision for an explicit constraint list in dimension 1 or 2. The
// first constraints must bound the region (as the identity's box does).
FeasibilityVerdict feasible_region(std::vector<HalfPlane> const& constraints, std::size_t dim);

bool verify_witness(std::vector<HalfPlane> const& constraints, Point const& x);

// Independent emptiness check: cross-product (Farkas) multipliers of the
// triple, or the antiparallel pair, must be nonnegative with negative
// combined right-hand side.
bool verify_certificate(std::vector<HalfPlane> const& certificate, std::size_t dim);

// Checks the multipliers carried by a verdict.
bool verify_multipliers(std::vector<HalfPlane> const& certificate, std::vector<Rational> const& multipliers);

struct Box {
  std::vector<Rational> lo;
  std::vector<Rational> hi;

  std::size_t dim() const noexcept { return lo.size(); }
  bool empty() const;
  // Largest side length (0 for an empty box).
  Rational width() const;
  Point center() const;
  bool contains(Point const& x) const;
};

// Scans lo + i*step in the box (every coordinate), returning the first grid
// point satisfying every constraint. nullopt does not prove infeasibility.
// Throws CapExceeded when the grid has more than `cap` points.
std::optional<Point> grid_oracle(ShadowingProblem const& problem, Rational const& step, Box const& box,
                                 std::size_t cap = 1'000'000);

// Admissible x_q for |z_k - B^k x| <= eps, k = 0..K, with B diagonal and
// expanding; window[k] = z_k.
Box fiber_shadow_expanding(Matrix const& b, std::vector<Point> const& window, Rational const& eps);

// Same for k over the window's index range with M diagonal and hyperbolic.
Box fiber_shadow_hyperbolic(Matrix const& m, ZWindow const& window, Rational const& eps);

struct CoherenceReport {
  Rational value;  // max dist(x_{sq}, f_s(x_q)) over interior edges
  std::optional<Edge> worst;
  std::size_t edges = 0;
};

// fibers[i] is x_q for q = ball.element(i).
CoherenceReport coherence_check(LinearAction const& action, CayleyBall const& ball,
                                std::vector<Point> const& fibers);

}  // namespace shadowlab
