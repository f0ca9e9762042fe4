#include "shadowlab/shadow.hpp"

#include <algorithm>

#include "shadowlab/error.hpp"

namespace shadowlab {

namespace {

struct Vec2 {
  Rational x;
  Rational y;
};

Vec2 normal(HalfPlane const& h) { return {h.a, h.b}; }
Rational cross(Vec2 const& u, Vec2 const& v) { return u.x * v.y - u.y * v.x; }
Rational dot(Vec2 const& u, Vec2 const& v) { return u.x * v.x + u.y * v.y; }

// Nonnegative t with n0 + t n1 = 0, if the normals are antiparallel.
std::optional<Rational> antiparallel_factor(Vec2 const& n0, Vec2 const& n1) {
  if (cross(n0, n1) != 0 || dot(n0, n1) >= 0) return std::nullopt;
  return n1.x != 0 ? Rational(-n0.x / n1.x) : Rational(-n0.y / n1.y);
}

bool pair_empty(HalfPlane const& h0, HalfPlane const& h1) {
  auto const t = antiparallel_factor(normal(h0), normal(h1));
  return t && h0.c + *t * h1.c < 0;
}

bool triple_empty(HalfPlane const& h0, HalfPlane const& h1, HalfPlane const& h2) {
  Vec2 const n0 = normal(h0);
  Vec2 const n1 = normal(h1);
  Vec2 const n2 = normal(h2);
  // m0 n0 + m1 n1 + m2 n2 = 0 identically for these multipliers.
  Rational m0 = cross(n1, n2);
  Rational m1 = cross(n2, n0);
  Rational m2 = cross(n0, n1);
  if (m0 <= 0 && m1 <= 0 && m2 <= 0) {
    m0 = -m0;
    m1 = -m1;
    m2 = -m2;
  }
  if (m0 < 0 || m1 < 0 || m2 < 0 || (m0 == 0 && m1 == 0 && m2 == 0)) return false;
  return m0 * h0.c + m1 * h1.c + m2 * h2.c < 0;
}

Point vertex_of(Vec2 const& n1, Rational const& c1, Vec2 const& n2, Rational const& c2) {
  Rational const det = cross(n1, n2);
  return Point{(c1 * n2.y - n1.y * c2) / det, (n1.x * c2 - c1 * n2.x) / det};
}

void dedupe_cyclic(std::vector<Point>& poly) {
  std::vector<Point> out;
  for (auto& p : poly) {
    if (out.empty() || !(out.back() == p)) out.push_back(std::move(p));
  }
  while (out.size() > 1 && out.back() == out.front()) out.pop_back();
  poly = std::move(out);
}

// Sutherland-Hodgman step against one half-plane; nullopt if untouched.
std::optional<std::vector<Point>> clip(std::vector<Point> const& poly, HalfPlane const& h) {
  std::vector<Rational> f;
  f.reserve(poly.size());
  bool any_out = false;
  for (auto const& v : poly) {
    f.push_back(h.lhs(v) - h.c);
    any_out = any_out || f.back() > 0;
  }
  if (!any_out) return std::nullopt;
  std::vector<Point> out;
  std::size_t const m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t const j = (i + 1) % m;
    if (f[i] <= 0) out.push_back(poly[i]);
    if ((f[i] < 0 && f[j] > 0) || (f[i] > 0 && f[j] < 0)) {
      Rational const t = f[i] / (f[i] - f[j]);
      out.push_back(poly[i] + t * (poly[j] - poly[i]));
    }
  }
  dedupe_cyclic(out);
  return out;
}

// The previous region (vertices `poly`, cut out by constraints[0..k)) misses
// constraints[k]. At the vertex minimizing its left-hand side, -normal lies in
// the cone of at most two active normals; those plus constraints[k] form the
// certificate.
FeasibilityVerdict certificate_2d(std::vector<HalfPlane> const& constraints, std::size_t k,
                                  std::vector<Point> const& poly) {
  HalfPlane const& h = constraints[k];
  Point const* best = &poly.front();
  Rational best_value = h.lhs(*best);
  for (auto const& v : poly) {
    Rational const val = h.lhs(v);
    if (val < best_value) {
      best_value = val;
      best = &v;
    }
  }
  Vec2 const dir{-h.a, -h.b};

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < k; ++i) {
    if (constraints[i].lhs(*best) == constraints[i].c) active.push_back(i);
  }

  FeasibilityVerdict v;
  v.constraints = k + 1;
  auto finish = [&](std::vector<std::size_t> const& idx, std::vector<Rational> mult) {
    for (auto i : idx) v.certificate.push_back(constraints[i]);
    v.certificate.push_back(h);
    mult.push_back(1);
    v.multipliers = std::move(mult);
    if (!verify_multipliers(v.certificate, v.multipliers)) {
      throw Error("infeasibility certificate failed its own check");
    }
    return v;
  };

  std::optional<std::size_t> left;
  std::optional<std::size_t> right;
  Rational left_cot;
  Rational right_cot;
  for (auto i : active) {
    Vec2 const n = normal(constraints[i]);
    Rational const cr = cross(dir, n);
    Rational const dt = dot(dir, n);
    if (cr == 0 && dt > 0) {
      return finish({i}, {dt / dot(n, n)});
    }
    if (cr > 0) {
      Rational const cot = dt / cr;
      if (!left || cot > left_cot) {
        left = i;
        left_cot = cot;
      }
    } else if (cr < 0) {
      Rational const cot = dt / -cr;
      if (!right || cot > right_cot) {
        right = i;
        right_cot = cot;
      }
    }
  }
  auto solve = [&](std::size_t i, std::size_t j) -> std::optional<std::vector<Rational>> {
    Vec2 const ni = normal(constraints[i]);
    Vec2 const nj = normal(constraints[j]);
    Rational const det = cross(ni, nj);
    if (det == 0) return std::nullopt;
    Rational const mi = cross(dir, nj) / det;
    Rational const mj = cross(ni, dir) / det;
    if (mi < 0 || mj < 0) return std::nullopt;
    return std::vector<Rational>{mi, mj};
  };
  if (left && right) {
    if (auto m = solve(*left, *right)) return finish({*left, *right}, std::move(*m));
  }
  for (std::size_t x = 0; x < active.size(); ++x) {
    for (std::size_t y = x + 1; y < active.size(); ++y) {
      if (auto m = solve(active[x], active[y])) return finish({active[x], active[y]}, std::move(*m));
    }
  }
  throw Error("no dual multipliers at the minimizing vertex");
}

FeasibilityVerdict decide_1d(std::vector<HalfPlane> const& constraints) {
  FeasibilityVerdict v;
  std::optional<std::size_t> lo;
  std::optional<std::size_t> hi;
  Rational lo_value;
  Rational hi_value;
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    HalfPlane const& h = constraints[k];
    if (h.a == 0) throw DomainError("half-plane with zero normal");
    Rational const bound = h.c / h.a;
    if (h.a > 0 && (!hi || bound < hi_value)) {
      hi = k;
      hi_value = bound;
    } else if (h.a < 0 && (!lo || bound > lo_value)) {
      lo = k;
      lo_value = bound;
    }
    if (lo && hi && lo_value > hi_value) {
      v.constraints = k + 1;
      HalfPlane const& p = constraints[*lo];
      HalfPlane const& q = constraints[*hi];
      v.certificate = {p, q};
      v.multipliers = {abs(q.a), abs(p.a)};
      return v;
    }
  }
  if (!lo || !hi) throw DomainError("constraints do not bound the admissible interval");
  v.feasible = true;
  v.constraints = constraints.size();
  v.witness = Point{lo_value};
  v.region_vertices = lo_value == hi_value ? 1 : 2;
  if (lo_value < hi_value) v.strict_witness = Point{(lo_value + hi_value) / 2};
  return v;
}

FeasibilityVerdict decide_2d(std::vector<HalfPlane> const& constraints) {
  if (constraints.size() < 4) throw DomainError("need at least four constraints to bound the region");
  HalfPlane const& u1 = constraints[0];
  HalfPlane const& l1 = constraints[1];
  HalfPlane const& u2 = constraints[2];
  HalfPlane const& l2 = constraints[3];
  Vec2 const n1 = normal(u1);
  Vec2 const n2 = normal(u2);
  if (!(l1.a == -u1.a && l1.b == -u1.b && l2.a == -u2.a && l2.b == -u2.b) || cross(n1, n2) == 0) {
    throw DomainError("first four constraints must be two opposite pairs with independent normals");
  }
  FeasibilityVerdict v;
  for (auto const& [u, l] : {std::pair{&u1, &l1}, std::pair{&u2, &l2}}) {
    if (-l->c > u->c) {
      v.constraints = 4;
      v.certificate = {*u, *l};
      v.multipliers = {1, 1};
      return v;
    }
  }
  std::vector<Point> poly{vertex_of(n1, u1.c, n2, u2.c), vertex_of(n1, -l1.c, n2, u2.c),
                          vertex_of(n1, -l1.c, n2, -l2.c), vertex_of(n1, u1.c, n2, -l2.c)};
  dedupe_cyclic(poly);

  for (std::size_t k = 4; k < constraints.size(); ++k) {
    auto next = clip(poly, constraints[k]);
    if (!next) continue;
    if (next->empty()) return certificate_2d(constraints, k, poly);
    poly = std::move(*next);
  }
  v.feasible = true;
  v.constraints = constraints.size();
  v.region_vertices = poly.size();
  v.witness = *std::min_element(poly.begin(), poly.end());
  if (poly.size() >= 3) {
    Point centroid{Rational(0), Rational(0)};
    for (auto const& p : poly) centroid = centroid + p;
    centroid = Rational(1, static_cast<unsigned long>(poly.size())) * centroid;
    bool const strict = std::all_of(constraints.begin(), constraints.end(),
                                    [&](HalfPlane const& h) { return h.strictly_satisfied(centroid); });
    if (strict) v.strict_witness = centroid;
  }
  return v;
}

Rational power_of_entry(Matrix const& m, std::size_t i, std::int64_t k) { return power(m(i, i), k); }

}  // namespace

Rational HalfPlane::lhs(Point const& x) const {
  return x.dim() == 1 ? Rational(a * x[0]) : Rational(a * x[0] + b * x[1]);
}

ShadowingProblem::ShadowingProblem(LinearAction action, Pseudotrajectory trajectory, Rational epsilon)
    : action_(std::move(action)), trajectory_(std::move(trajectory)), epsilon_(std::move(epsilon)) {
  if (epsilon_ <= 0) throw DomainError("epsilon must be positive");
  if (trajectory_.mode() != NumericMode::Exact) throw DomainError("shadowing problems need an exact trajectory");
  if (!(trajectory_.ball().spec() == action_.spec())) throw FamilyMismatch();
  if (action_.dim() < 1 || action_.dim() > 2) throw DomainError("feasibility is decided in dimension 1 or 2 only");
  if (trajectory_.dim() != action_.dim()) throw DomainError("trajectory dimension differs from the action");
}

std::vector<HalfPlane> shadow_constraints(ShadowingProblem const& problem) {
  std::size_t const d = problem.dim();
  Pseudotrajectory const& traj = problem.trajectory();
  CayleyBall const& ball = traj.ball();
  Rational const& eps = problem.epsilon();
  std::vector<Matrix> const ms = ball_matrices(problem.action(), ball);
  std::vector<HalfPlane> out;
  out.reserve(2 * d * ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) {
    std::string const word = ball.word(i);
    Point const& y = traj.point(i);
    for (std::size_t c = 0; c < d; ++c) {
      Rational const a = ms[i](c, 0);
      Rational const b = d == 2 ? ms[i](c, 1) : Rational(0);
      out.push_back({a, b, y[c] + eps, word, i, c, 1});
      out.push_back({-a, -b, eps - y[c], word, i, c, -1});
    }
  }
  return out;
}

FeasibilityVerdict feasible_region(std::vector<HalfPlane> const& constraints, std::size_t dim) {
  if (dim == 1) return decide_1d(constraints);
  if (dim == 2) return decide_2d(constraints);
  throw DomainError("feasibility is decided in dimension 1 or 2 only");
}

FeasibilityVerdict feasible_shadow(ShadowingProblem const& problem) {
  return feasible_region(shadow_constraints(problem), problem.dim());
}

bool verify_witness(std::vector<HalfPlane> const& constraints, Point const& x) {
  return std::all_of(constraints.begin(), constraints.end(), [&](HalfPlane const& h) { return h.satisfied(x); });
}

bool verify_certificate(std::vector<HalfPlane> const& certificate, std::size_t dim) {
  if (dim == 1) {
    if (certificate.size() != 2) return false;
    HalfPlane const& p = certificate[0];
    HalfPlane const& q = certificate[1];
    if (p.a == 0 || q.a == 0 || (p.a > 0) == (q.a > 0)) return false;
    return abs(q.a) * p.c + abs(p.a) * q.c < 0;
  }
  switch (certificate.size()) {
    case 2:
      return pair_empty(certificate[0], certificate[1]);
    case 3:
      return triple_empty(certificate[0], certificate[1], certificate[2]) ||
             pair_empty(certificate[0], certificate[1]) || pair_empty(certificate[0], certificate[2]) ||
             pair_empty(certificate[1], certificate[2]);
    default:
      return false;
  }
}

bool verify_multipliers(std::vector<HalfPlane> const& certificate, std::vector<Rational> const& multipliers) {
  if (certificate.empty() || certificate.size() != multipliers.size()) return false;
  Rational sa = 0;
  Rational sb = 0;
  Rational sc = 0;
  for (std::size_t i = 0; i < certificate.size(); ++i) {
    if (multipliers[i] < 0) return false;
    sa += multipliers[i] * certificate[i].a;
    sb += multipliers[i] * certificate[i].b;
    sc += multipliers[i] * certificate[i].c;
  }
  return sa == 0 && sb == 0 && sc < 0;
}

bool Box::empty() const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) return true;
  }
  return false;
}

Rational Box::width() const {
  if (empty()) return 0;
  Rational w = 0;
  for (std::size_t i = 0; i < lo.size(); ++i) w = std::max(w, Rational(hi[i] - lo[i]));
  return w;
}

Point Box::center() const {
  if (empty()) throw DomainError("center of an empty box");
  std::vector<Rational> c;
  for (std::size_t i = 0; i < lo.size(); ++i) c.push_back((lo[i] + hi[i]) / 2);
  return Point(std::move(c));
}

bool Box::contains(Point const& x) const {
  if (x.dim() != lo.size()) return false;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

std::optional<Point> grid_oracle(ShadowingProblem const& problem, Rational const& step, Box const& box,
                                 std::size_t cap) {
  if (step <= 0) throw DomainError("grid step must be positive");
  if (box.dim() != problem.dim() || box.empty()) throw DomainError("search box does not match the problem");
  std::vector<std::size_t> counts;
  std::size_t total = 1;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    Rational const q = (box.hi[i] - box.lo[i]) / step;
    Integer const n = q.get_num() / q.get_den() + 1;
    if (!n.fits_ulong_p() || n.get_ui() > cap || total * n.get_ui() > cap) {
      throw CapExceeded("grid exceeds cap of " + std::to_string(cap) + " points");
    }
    counts.push_back(n.get_ui());
    total *= n.get_ui();
  }
  std::vector<HalfPlane> const constraints = shadow_constraints(problem);
  std::vector<std::size_t> idx(box.dim(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t rem = n;
    std::vector<Rational> coords(box.dim());
    for (std::size_t i = box.dim(); i-- > 0;) {
      coords[i] = box.lo[i] + step * static_cast<unsigned long>(rem % counts[i]);
      rem /= counts[i];
    }
    Point const x(std::move(coords));
    if (verify_witness(constraints, x)) return x;
  }
  return std::nullopt;
}

namespace {

Box fiber_box(Matrix const& m, std::int64_t first, std::vector<Point> const& window, Rational const& eps) {
  if (window.empty()) throw DomainError("fiber window is empty");
  std::size_t const d = m.dim();
  Box box;
  for (std::size_t i = 0; i < d; ++i) {
    std::optional<Rational> lo;
    std::optional<Rational> hi;
    for (std::size_t k = 0; k < window.size(); ++k) {
      Rational const scale = power_of_entry(m, i, first + static_cast<std::int64_t>(k));
      Rational a = (window[k][i] - eps) / scale;
      Rational b = (window[k][i] + eps) / scale;
      if (scale < 0) std::swap(a, b);
      if (!lo || a > *lo) lo = a;
      if (!hi || b < *hi) hi = b;
    }
    box.lo.push_back(*lo);
    box.hi.push_back(*hi);
  }
  return box;
}

}  // namespace

Box fiber_shadow_expanding(Matrix const& b, std::vector<Point> const& window, Rational const& eps) {
  if (!b.is_diagonal()) throw DomainError("fiber matrix must be diagonal");
  for (std::size_t i = 0; i < b.dim(); ++i) {
    if (abs(b(i, i)) <= 1) throw DomainError("fiber matrix must be expanding");
  }
  return fiber_box(b, 0, window, eps);
}

Box fiber_shadow_hyperbolic(Matrix const& m, ZWindow const& window, Rational const& eps) {
  if (!m.is_diagonal()) throw DomainError("fiber matrix must be diagonal");
  for (std::size_t i = 0; i < m.dim(); ++i) {
    if (abs(m(i, i)) == 1) throw DomainError("fiber matrix must be hyperbolic");
  }
  return fiber_box(m, window.first, window.points, eps);
}

CoherenceReport coherence_check(LinearAction const& action, CayleyBall const& ball, std::vector<Point> const& fibers) {
  if (fibers.size() != ball.size()) throw DomainError("need one fiber point per ball element");
  std::vector<Matrix> const gens = generator_matrices(action, ball.generators());
  CoherenceReport rep;
  rep.value = 0;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    for (std::size_t s = 0; s < gens.size(); ++s) {
      std::size_t const j = ball.neighbor(i, s);
      if (j == CayleyBall::npos) continue;
      ++rep.edges;
      Rational const v = dist(fibers[j], gens[s] * fibers[i]);
      if (!rep.worst || v > rep.value) {
        rep.value = v;
        rep.worst = Edge{i, s, j};
      }
    }
  }
  return rep;
}

}  // namespace shadowlab
