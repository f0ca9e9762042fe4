#include "shadowlab/pseudo.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

#include "shadowlab/error.hpp"

namespace shadowlab {

namespace {

// Noise resolution: each noise coordinate is rho * u / kNoiseSteps.
constexpr std::int64_t kNoiseSteps = 1'000'000;

std::int64_t floor_div_int(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

void require_same_group(LinearAction const& action, CayleyBall const& ball) {
  if (!(ball.spec() == action.spec())) {
    throw FamilyMismatch();
  }
}

IntervalPoint apply_interval(Matrix const& m, IntervalPoint const& x) {
  std::size_t const d = m.dim();
  mpfr_prec_t const prec = x.front().precision();
  IntervalPoint out;
  for (std::size_t r = 0; r < d; ++r) {
    Interval acc(Rational(0), prec);
    for (std::size_t c = 0; c < d; ++c) {
      acc = acc + Interval(m(r, c), prec) * x[c];
    }
    out.push_back(std::move(acc));
  }
  return out;
}

Interval interval_dist(IntervalPoint const& x, IntervalPoint const& y) {
  Interval out = (x[0] - y[0]).abs();
  for (std::size_t i = 1; i < x.size(); ++i) {
    out = Interval::max(out, (x[i] - y[i]).abs());
  }
  return out;
}

Rational max_norm(std::vector<Matrix> const& ms) {
  Rational out = 0;
  for (auto const& m : ms) out = std::max(out, m.operator_norm());
  return out;
}

int letter_code(GroupSpec const& spec, char c) {
  return spec.letter(c).free_word().letters.front();
}

char letter_char(int code) {
  return code > 0 ? static_cast<char>('a' + code - 1) : static_cast<char>('A' - code - 1);
}

}  // namespace

std::string to_string(NumericMode mode) { return mode == NumericMode::Exact ? "exact" : "float"; }

Pseudotrajectory::Pseudotrajectory(BallPtr ball, std::vector<Point> points, Rational declared_d)
    : ball_(std::move(ball)), mode_(NumericMode::Exact), points_(std::move(points)),
      declared_d_(std::move(declared_d)) {
  if (points_.size() != ball_->size()) {
    throw DomainError("pseudotrajectory needs one point per ball element");
  }
  dim_ = points_.front().dim();
  for (auto const& p : points_) {
    if (p.dim() != dim_) throw DomainError("pseudotrajectory points have mixed dimensions");
  }
}

Pseudotrajectory::Pseudotrajectory(BallPtr ball, std::vector<IntervalPoint> points, Rational declared_d,
                                   mpfr_prec_t precision)
    : ball_(std::move(ball)), mode_(NumericMode::Float), intervals_(std::move(points)),
      declared_d_(std::move(declared_d)), precision_(precision) {
  if (intervals_.size() != ball_->size()) {
    throw DomainError("pseudotrajectory needs one point per ball element");
  }
  dim_ = intervals_.front().size();
  for (auto const& p : intervals_) {
    if (p.size() != dim_) throw DomainError("pseudotrajectory points have mixed dimensions");
  }
}

Point const& Pseudotrajectory::point(std::size_t i) const {
  if (mode_ != NumericMode::Exact) throw DomainError("exact point requested from a float pseudotrajectory");
  return points_.at(i);
}

IntervalPoint const& Pseudotrajectory::interval_point(std::size_t i) const {
  if (mode_ != NumericMode::Float) throw DomainError("interval point requested from an exact pseudotrajectory");
  return intervals_.at(i);
}

bool operator==(Pseudotrajectory const& x, Pseudotrajectory const& y) {
  if (x.mode_ != y.mode_ || !(x.ball().spec() == y.ball().spec()) || x.ball().radius() != y.ball().radius() ||
      x.ball().generators().labels() != y.ball().generators().labels() || x.declared_d_ != y.declared_d_ ||
      x.precision_ != y.precision_) {
    return false;
  }
  if (x.mode_ == NumericMode::Exact) return x.points_ == y.points_;
  if (x.intervals_.size() != y.intervals_.size()) return false;
  for (std::size_t i = 0; i < x.intervals_.size(); ++i) {
    for (std::size_t c = 0; c < x.dim_; ++c) {
      auto const& a = x.intervals_[i][c];
      auto const& b = y.intervals_[i][c];
      if (a.lower_hex() != b.lower_hex() || a.upper_hex() != b.upper_hex()) return false;
    }
  }
  return true;
}

Pseudotrajectory exact_orbit(LinearAction const& action, BallPtr ball, Point const& x0) {
  require_same_group(action, *ball);
  if (x0.dim() != action.dim()) throw DomainError("start point dimension differs from the action");
  std::vector<Point> pts;
  pts.reserve(ball->size());
  for (auto const& m : ball_matrices(action, *ball)) pts.push_back(m * x0);
  return Pseudotrajectory(std::move(ball), std::move(pts), Rational(0));
}

Rational perturbation_amplitude(LinearAction const& action, GeneratingSet const& generators, Rational const& d) {
  Rational const lip = max_norm(generator_matrices(action, generators));
  return d / (2 * (1 + lip));
}

Pseudotrajectory perturbed_orbit(LinearAction const& action, BallPtr ball, Point const& x0, Rational const& d,
                                 std::uint64_t seed) {
  if (d < 0) throw DomainError("perturbation size must be nonnegative");
  require_same_group(action, *ball);
  if (x0.dim() != action.dim()) throw DomainError("start point dimension differs from the action");

  Rational const rho = perturbation_amplitude(action, ball->generators(), d);
  // Raw engine output keeps the stream identical across standard libraries.
  std::mt19937_64 engine(seed);
  auto noise = [&] {
    auto const u = static_cast<std::int64_t>(engine() % static_cast<std::uint64_t>(2 * kNoiseSteps + 1)) - kNoiseSteps;
    Rational step(static_cast<long>(u), static_cast<unsigned long>(kNoiseSteps));
    step.canonicalize();
    return Rational(rho * step);
  };

  std::vector<Matrix> const ms = ball_matrices(action, *ball);
  std::vector<Point> pts;
  pts.reserve(ball->size());
  pts.push_back(x0);
  for (std::size_t i = 1; i < ball->size(); ++i) {
    Point y = ms[i] * x0;
    for (std::size_t c = 0; c < y.dim(); ++c) y[c] += noise();
    pts.push_back(std::move(y));
  }
  return Pseudotrajectory(std::move(ball), std::move(pts), d);
}

Interval counterexample_beta(CounterexampleParams const& params) {
  Rational const n(static_cast<long>(params.n));
  if (params.lambda == n) return Interval(Rational(1), params.precision);
  return Interval::log(params.lambda, params.precision) / Interval::log(n, params.precision);
}

LinearAction bs_action(std::int64_t n, Rational const& lambda) {
  GroupSpec const spec = GroupSpec::baumslag_solitar(n);
  return load_action(spec, {{"a", Matrix(2, {1, 0, 1, 1})},
                            {"b", Matrix::diagonal({lambda, Rational(static_cast<long>(n)) * lambda})}});
}

Pseudotrajectory bs_counterexample(CounterexampleParams const& params, BallPtr ball) {
  Rational const n(static_cast<long>(params.n));
  if (ball->spec().family() != Family::BaumslagSolitar || ball->spec().bs_n() != params.n) {
    throw FamilyMismatch();
  }
  if (params.lambda <= 1 || params.lambda > n) throw DomainError("counterexample requires lambda in (1, n]");
  if (params.d <= 0) throw DomainError("counterexample requires d > 0");
  if (params.mode == NumericMode::Exact && params.lambda != n) {
    throw DomainError("exact mode requires lambda = n (beta = 1)");
  }

  Rational const third = params.d / 3;
  AuxState const origin{Rational(0), 0};
  if (params.mode == NumericMode::Exact) {
    std::vector<Point> pts;
    pts.reserve(ball->size());
    for (std::size_t i = 0; i < ball->size(); ++i) {
      AuxState const s = aux_apply(params.n, ball->element(i), origin);
      Rational const ax = abs(s.x);
      pts.push_back(Point{third * 2 * power(params.lambda, s.k) * ax,
                          third * power(n * params.lambda, s.k) * s.x * ax});
    }
    return Pseudotrajectory(std::move(ball), std::move(pts), params.d);
  }

  mpfr_prec_t const prec = params.precision;
  Interval const beta = counterexample_beta(params);
  Interval const one(Rational(1), prec);
  Interval const one_plus_beta = one + beta;
  Interval const zero(Rational(0), prec);
  std::vector<IntervalPoint> pts;
  pts.reserve(ball->size());
  for (std::size_t i = 0; i < ball->size(); ++i) {
    AuxState const s = aux_apply(params.n, ball->element(i), origin);
    if (s.x == 0) {
      pts.push_back({zero, zero});
      continue;
    }
    Interval const ax(abs(s.x), prec);
    Interval const sign(Rational(sgn(s.x)), prec);
    Interval p1 = Interval(third * power(params.lambda, s.k), prec) * one_plus_beta * ax.pow(beta);
    Interval p2 = Interval(third * power(n * params.lambda, s.k), prec) * sign * ax.pow(one_plus_beta);
    pts.push_back({std::move(p1), std::move(p2)});
  }
  return Pseudotrajectory(std::move(ball), std::move(pts), params.d, prec);
}

Pseudotrajectory free_two_branch(LinearAction const& action, TwoBranchParams const& params, BallPtr ball) {
  require_same_group(action, *ball);
  GroupSpec const& spec = action.spec();
  if (spec.family() != Family::Free) throw DomainError("two-branch construction needs a free group");
  if (params.expansive.family() != Family::Free || is_identity(params.expansive)) {
    throw DomainError("designated element must be a nontrivial free-group element");
  }
  int const q = letter_code(spec, params.q);
  int const s1 = params.expansive.free_word().letters.back();
  if (q == s1 || q == -s1) {
    throw DomainError(std::string("q = '") + params.q + "' must differ from the rightmost letter of g and its inverse");
  }
  if (params.omega0.dim() != action.dim() || params.omega.dim() != action.dim()) {
    throw DomainError("branch points have the wrong dimension");
  }

  Matrix const& q_inv = action.letter_matrix(letter_char(-q));
  Point const start0 = q_inv * params.omega0;
  Point const start1 = q_inv * params.omega;
  std::vector<Matrix> const ms = ball_matrices(action, *ball);
  std::vector<Point> pts;
  pts.reserve(ball->size());
  for (std::size_t i = 0; i < ball->size(); ++i) {
    auto const& w = ball->element(i).free_word().letters;
    bool const branch = !w.empty() && w.back() == q;
    pts.push_back(ms[i] * (branch ? start1 : start0));
  }
  Rational const declared = std::max(dist(params.omega, params.omega0), dist(start1, start0));
  Pseudotrajectory out(std::move(ball), std::move(pts), declared);
  if (params.omega0 == params.omega) {
    out.add_note("omega0 equals omega; the two-branch sequence is an exact orbit");
  }
  return out;
}

Rational lift_amplification(LinearAction const& action, GroupElement const& g) {
  auto const& letters = g.free_word().letters;  // s_r ... s_1
  std::size_t const r = letters.size();
  Rational out = 1;
  Matrix m = Matrix::identity(action.dim());
  for (std::size_t j = 1; j <= r; ++j) {  // f_{s_j} ... f_{s_1}
    m = action.letter_matrix(letter_char(letters[r - j])) * m;
    out = std::max(out, m.operator_norm());
  }
  m = Matrix::identity(action.dim());
  for (std::size_t j = r; j >= 1; --j) {  // f_{s_j}^-1 ... f_{s_r}^-1
    m = action.letter_matrix(letter_char(-letters[r - j])) * m;
    out = std::max(out, m.operator_norm());
  }
  return out;
}

Rational window_defect(Matrix const& m, ZWindow const& window) {
  Rational out = 0;
  for (std::size_t k = 0; k + 1 < window.points.size(); ++k) {
    out = std::max(out, dist(window.points[k + 1], m * window.points[k]));
  }
  return out;
}

Pseudotrajectory lift_Z_to_free(LinearAction const& action, GroupElement const& g, ZWindow const& window,
                                BallPtr ball) {
  require_same_group(action, *ball);
  GroupSpec const& spec = action.spec();
  if (spec.family() != Family::Free || g.family() != Family::Free) {
    throw DomainError("lift needs a free group");
  }
  auto const& letters = g.free_word().letters;  // s_r ... s_1
  if (letters.empty()) throw DomainError("lift needs g != e");
  if (letters.size() > 1 && letters.front() == -letters.back()) {
    throw DomainError("lift needs a cyclically reduced g");
  }
  auto const r = static_cast<std::int64_t>(letters.size());
  std::int64_t const radius = ball->radius();
  std::int64_t const kmin = floor_div_int(-radius, r);
  std::int64_t const kmax = floor_div_int(radius, r);
  if (window.points.empty() || window.first > kmin || window.last() < kmax) {
    throw DomainError("window must cover indices " + std::to_string(kmin) + ".." + std::to_string(kmax));
  }

  // s_j ... s_1 for j = 0..r-1 as elements and as matrices.
  std::vector<GroupElement> prefix{spec.identity()};
  std::vector<Matrix> prefix_m{Matrix::identity(action.dim())};
  for (std::int64_t j = 1; j < r; ++j) {
    int const code = letters[static_cast<std::size_t>(r - j)];
    prefix.push_back(multiply(spec, GroupElement(FreeWord{{code}}), prefix.back()));
    prefix_m.push_back(action.letter_matrix(letter_char(code)) * prefix_m.back());
  }

  // Line points and interpolated values for i in [-R, R].
  std::unordered_map<GroupElement, std::int64_t, ElementHash> line;
  std::vector<Point> z;
  for (std::int64_t i = -radius; i <= radius; ++i) {
    std::int64_t const k = floor_div_int(i, r);
    auto const j = static_cast<std::size_t>(i - r * k);
    line.emplace(multiply(spec, prefix[j], power(spec, g, k)), i);
    z.push_back(prefix_m[j] * window.at(k));
  }

  std::vector<Point> pts;
  pts.reserve(ball->size());
  for (std::size_t t = 0; t < ball->size(); ++t) {
    GroupElement const& elem = ball->element(t);
    auto const norm = static_cast<std::int64_t>(ball->norm(t));
    // The nearest line point has norm at most |t| and is unique in the tree.
    std::optional<std::pair<std::size_t, std::int64_t>> best;
    GroupElement best_v;
    for (std::int64_t i = -norm; i <= norm; ++i) {
      std::int64_t const k = floor_div_int(i, r);
      auto const j = static_cast<std::size_t>(i - r * k);
      GroupElement const w = multiply(spec, prefix[j], power(spec, g, k));
      GroupElement v = multiply(spec, elem, inverse(spec, w));
      std::size_t const len = v.free_word().letters.size();
      if (!best || len < best->first) {
        best = {len, i};
        best_v = std::move(v);
      }
    }
    pts.push_back(matrix_of(action, best_v) * z[static_cast<std::size_t>(best->second + radius)]);
  }

  Matrix const mg = matrix_of(action, g);
  Rational const declared = lift_amplification(action, g) * window_defect(mg, window);
  return Pseudotrajectory(std::move(ball), std::move(pts), declared);
}

namespace {

template <class NeighborFn>
DefectReport exact_defect(Pseudotrajectory const& traj, std::vector<Matrix> const& gens, NeighborFn neighbor) {
  DefectReport rep;
  rep.mode = NumericMode::Exact;
  rep.value = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (std::size_t s = 0; s < gens.size(); ++s) {
      std::size_t const j = neighbor(i, s);
      if (j == CayleyBall::npos) {
        ++rep.skipped_edges;
        continue;
      }
      ++rep.interior_edges;
      Rational const v = dist(traj.point(j), gens[s] * traj.point(i));
      if (!rep.worst || v > rep.value) {
        rep.value = v;
        rep.worst = Edge{i, s, j};
      }
    }
  }
  return rep;
}

}  // namespace

DefectReport max_defect(Pseudotrajectory const& traj, LinearAction const& action) {
  CayleyBall const& b = traj.ball();
  require_same_group(action, b);
  std::vector<Matrix> const gens = generator_matrices(action, b.generators());
  if (traj.mode() == NumericMode::Exact) {
    return exact_defect(traj, gens, [&](std::size_t i, std::size_t s) { return b.neighbor(i, s); });
  }

  DefectReport rep;
  rep.mode = NumericMode::Float;
  std::optional<Interval> worst;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (std::size_t s = 0; s < gens.size(); ++s) {
      std::size_t const j = b.neighbor(i, s);
      if (j == CayleyBall::npos) {
        ++rep.skipped_edges;
        continue;
      }
      ++rep.interior_edges;
      Interval const v = interval_dist(traj.interval_point(j), apply_interval(gens[s], traj.interval_point(i)));
      if (!worst || mpfr_greater_p(v.upper(), worst->upper())) {
        rep.worst = Edge{i, s, j};
      }
      worst = worst ? Interval::max(*worst, v) : v;
    }
  }
  if (worst) {
    rep.value = worst->upper_rational();
    rep.enclosure = std::move(worst);
  }
  return rep;
}

DefectReport max_defect(Pseudotrajectory const& traj, LinearAction const& action, GeneratingSet const& generators) {
  CayleyBall const& b = traj.ball();
  require_same_group(action, b);
  std::vector<Matrix> const gens = generator_matrices(action, generators);
  GroupSpec const& spec = b.spec();
  return exact_defect(traj, gens, [&](std::size_t i, std::size_t s) {
    auto const j = b.index_of(multiply(spec, generators[s].element, b.element(i)));
    return j ? *j : CayleyBall::npos;
  });
}

std::vector<EdgeResidual> edge_residuals(Pseudotrajectory const& traj, LinearAction const& action) {
  CayleyBall const& b = traj.ball();
  require_same_group(action, b);
  std::vector<Matrix> const gens = generator_matrices(action, b.generators());
  std::vector<EdgeResidual> out;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (std::size_t s = 0; s < gens.size(); ++s) {
      std::size_t const j = b.neighbor(i, s);
      if (j == CayleyBall::npos) continue;
      out.push_back({Edge{i, s, j}, traj.point(j) - gens[s] * traj.point(i)});
    }
  }
  return out;
}

}  // namespace shadowlab
