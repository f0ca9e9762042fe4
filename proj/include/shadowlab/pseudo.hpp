#pragma once

// Finite-window pseudotrajectories: maps from the elements of a Cayley ball
// to points, with exact measurement of the defects dist(y_sg, f_s(y_g)).

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shadowlab/action.hpp"
#include "shadowlab/group.hpp"
#include "shadowlab/interval.hpp"
#include "shadowlab/linalg.hpp"

namespace shadowlab {

enum class NumericMode { Exact, Float };

std::string to_string(NumericMode mode);

using IntervalPoint = std::vector<Interval>;
using BallPtr = std::shared_ptr<CayleyBall const>;

class Pseudotrajectory {
 public:
  // Exact mode; points[i] belongs to ball->element(i).
  Pseudotrajectory(BallPtr ball, std::vector<Point> points, Rational declared_d);
  // Float mode with interval enclosures of every coordinate.
  Pseudotrajectory(BallPtr ball, std::vector<IntervalPoint> points, Rational declared_d,
                   mpfr_prec_t precision);

  CayleyBall const& ball() const noexcept { return *ball_; }
  BallPtr const& ball_ptr() const noexcept { return ball_; }
  NumericMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return ball_->size(); }
  std::size_t dim() const noexcept { return dim_; }

  // Exact mode only.
  Point const& point(std::size_t i) const;
  std::vector<Point> const& points() const noexcept { return points_; }
  // Float mode only.
  IntervalPoint const& interval_point(std::size_t i) const;

  Rational const& declared_d() const noexcept { return declared_d_; }
  mpfr_prec_t precision() const noexcept { return precision_; }

  // Non-fatal remarks from construction (e.g. a degenerate two-branch split).
  std::vector<std::string> const& notes() const noexcept { return notes_; }
  void add_note(std::string note) { notes_.push_back(std::move(note)); }

  friend bool operator==(Pseudotrajectory const& x, Pseudotrajectory const& y);

 private:
  BallPtr ball_;
  NumericMode mode_ = NumericMode::Exact;
  std::size_t dim_ = 0;
  std::vector<Point> points_;
  std::vector<IntervalPoint> intervals_;
  Rational declared_d_;
  mpfr_prec_t precision_ = 0;
  std::vector<std::string> notes_;
};

// y_g = f_g(x0).
Pseudotrajectory exact_orbit(LinearAction const& action, BallPtr ball, Point const& x0);

// y_g = f_g(x0) + eta_g with y_e = x0. Each coordinate of eta_g is a seeded
// uniform rational in [-rho, rho], rho = d / (2 (1 + L)), L the largest
// operator norm over the ball's generators, so every edge defect is <= d/2.
// d = 0 gives the exact orbit.
Pseudotrajectory perturbed_orbit(LinearAction const& action, BallPtr ball, Point const& x0,
                                 Rational const& d, std::uint64_t seed);

// Amplitude rho used by perturbed_orbit.
Rational perturbation_amplitude(LinearAction const& action, GeneratingSet const& generators,
                                Rational const& d);

struct CounterexampleParams {
  std::int64_t n = 2;
  Rational lambda = 2;
  Rational d = Rational(1, 10);
  NumericMode mode = NumericMode::Exact;
  mpfr_prec_t precision = Interval::kDefaultPrecision;
};

// Enclosure of beta = ln(lambda) / ln(n) (exactly 1 when lambda = n).
Interval counterexample_beta(CounterexampleParams const& params);

// The standard action of BS(1,n): a -> [[1,0],[1,1]], b -> diag(lambda, n*lambda).
LinearAction bs_action(std::int64_t n, Rational const& lambda);

// y_g = (d/3) F(Psi(g, (0,0))) with
//   F(x, k) = ((1+beta) lambda^k |x|^beta, (n lambda)^k sign(x) |x|^(1+beta)).
// Exact mode requires lambda = n.
Pseudotrajectory bs_counterexample(CounterexampleParams const& params, BallPtr ball);

// Two-branch pseudotrajectory on F(k): y_t = f_t(f_q^-1(omega)) when the
// rightmost letter of t is q, else f_t(f_q^-1(omega0)). The only defective
// edges are e -> q and q -> e; declared d is the larger of their defects,
// dist(omega, omega0) and dist(f_q^-1(omega), f_q^-1(omega0)).
// omega0 == omega yields an exact orbit and a note.
struct TwoBranchParams {
  GroupElement expansive;  // g; q may not be its rightmost letter or that letter's inverse
  char q = 'b';
  Point omega0;
  Point omega;
};

Pseudotrajectory free_two_branch(LinearAction const& action, TwoBranchParams const& params,
                                 BallPtr ball);

// x_k for k = first, first + 1, ...
struct ZWindow {
  std::int64_t first = 0;
  std::vector<Point> points;

  std::int64_t last() const { return first + static_cast<std::int64_t>(points.size()) - 1; }
  Point const& at(std::int64_t k) const { return points[static_cast<std::size_t>(k - first)]; }
};

// Lifts a window of f_g (g = s_r...s_1 cyclically reduced, g != e) to F(k).
// The interpolated sequence is z_{rk} = x_k, z_{rk+j+1} = f_{s_{j+1}}(z_{rk+j})
// for 0 <= j < r-1; the line point w_i is s_j...s_1 g^k for i = rk + j >= 0 and
// its mirror for i < 0. Then y_t = f_v(z_i) where t = v w_i with |v| minimal.
// Declared d is lift_amplification(g) * window_defect; every defect is <= it.
// Throws DomainError when the window does not cover indices
// floor(-R/r)..floor(R/r) of the ball radius R.
Pseudotrajectory lift_Z_to_free(LinearAction const& action, GroupElement const& g,
                                ZWindow const& window, BallPtr ball);

// max over the maps f_{s_j}...f_{s_1} and f_{s_j}^-1...f_{s_r}^-1 (1 <= j <= r)
// of the operator norm, and at least 1. The lift's defect is at most this
// times the window defect.
Rational lift_amplification(LinearAction const& action, GroupElement const& g);

// max_k dist(x_{k+1}, M x_k) over the window.
Rational window_defect(Matrix const& m, ZWindow const& window);

struct Edge {
  std::size_t from = 0;       // g
  std::size_t generator = 0;  // s
  std::size_t to = 0;         // s g
};

struct DefectReport {
  NumericMode mode = NumericMode::Exact;
  // Exact maximum, or in float mode a rigorous upper bound.
  Rational value;
  // Float mode: enclosure of the maximum; its width bounds the rounding error.
  std::optional<Interval> enclosure;
  std::optional<Edge> worst;
  std::size_t interior_edges = 0;
  std::size_t skipped_edges = 0;  // s g outside the ball
};

DefectReport max_defect(Pseudotrajectory const& traj, LinearAction const& action);
// Defects along another generating set of the same group (exact mode).
DefectReport max_defect(Pseudotrajectory const& traj, LinearAction const& action,
                        GeneratingSet const& generators);

// Signed residual y_sg - f_s(y_g) on every interior edge (exact mode).
struct EdgeResidual {
  Edge edge;
  Point residual;
};
std::vector<EdgeResidual> edge_residuals(Pseudotrajectory const& traj, LinearAction const& action);

}  // namespace shadowlab
