#include "shadowlab/action.hpp"

#include <algorithm>
#include <cctype>

namespace shadowlab {

namespace {

std::string format_entries(std::vector<Rational> const& r) {
  std::string s = "[";
  for (std::size_t i = 0; i < r.size(); ++i) {
    s += (i ? ", " : "") + format(r[i]);
  }
  return s + "]";
}

// Exact square root of a nonnegative rational, if rational.
std::optional<Rational> rational_sqrt(Rational const& q) {
  if (q < 0) {
    return std::nullopt;
  }
  Integer const num = q.get_num();
  Integer const den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
    return std::nullopt;
  }
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

Point eigenvector(Matrix const& m, Rational const& mu) {
  if (m.dim() == 1) {
    return Point{Rational(1)};
  }
  Rational const a = m(0, 0) - mu;
  Rational const b = m(0, 1);
  Rational const c = m(1, 0);
  Rational const d = m(1, 1) - mu;
  if (a != 0 || b != 0) {
    return Point{b, -a};
  }
  if (c != 0 || d != 0) {
    return Point{d, -c};
  }
  return Point{Rational(1), Rational(0)};  // m == mu * I
}

}  // namespace

RelationViolation::RelationViolation(Relation relation, std::vector<Rational> residual)
    : Error("relation " + relation.lhs + " = " + relation.rhs + " violated, residual " +
            format_entries(residual)),
      relation_(std::move(relation)),
      residual_(std::move(residual)) {}

Matrix const& LinearAction::letter_matrix(char letter) const {
  int const i = std::tolower(static_cast<unsigned char>(letter)) - 'a';
  if (!std::isalpha(static_cast<unsigned char>(letter)) || i < 0 ||
      i >= static_cast<int>(positive_.size())) {
    throw DomainError(std::string("letter '") + letter + "' is not a generator of " + spec_.descriptor());
  }
  auto const idx = static_cast<std::size_t>(i);
  return std::islower(static_cast<unsigned char>(letter)) ? positive_[idx] : inverse_[idx];
}

LinearAction load_action(GroupSpec const& spec, std::map<std::string, Matrix> const& matrices) {
  LinearAction action;
  action.spec_ = spec;
  for (int i = 0; i < spec.rank(); ++i) {
    std::string const key(1, static_cast<char>('a' + i));
    auto const it = matrices.find(key);
    if (it == matrices.end()) {
      throw DomainError("no matrix for generator '" + key + "' of " + spec.descriptor());
    }
    if (action.dim_ == 0) {
      action.dim_ = it->second.dim();
    } else if (action.dim_ != it->second.dim()) {
      throw DomainError("generator matrices have different dimensions");
    }
    action.positive_.push_back(it->second);
    action.inverse_.push_back(it->second.inverse());
  }
  if (matrices.size() != static_cast<std::size_t>(spec.rank())) {
    throw DomainError("matrices given for letters that are not generators of " + spec.descriptor());
  }
  action.matrices_ = matrices;

  for (auto const& rel : spec.relations()) {
    Matrix const lhs = word_matrix(action, rel.lhs);
    Matrix const rhs = word_matrix(action, rel.rhs);
    if (!(lhs == rhs)) {
      throw RelationViolation(rel, residual(lhs, rhs));
    }
  }

  action.continuity_bound_ = 0;
  for (std::size_t i = 0; i < action.positive_.size(); ++i) {
    action.continuity_bound_ = std::max({action.continuity_bound_, action.positive_[i].operator_norm(),
                                         action.inverse_[i].operator_norm()});
  }
  return action;
}

Matrix word_matrix(LinearAction const& action, std::string_view word) {
  Matrix m = Matrix::identity(action.dim());
  if (word == "e") {
    return m;
  }
  for (char c : word) {
    m = m * action.letter_matrix(c);
  }
  return m;
}

Matrix matrix_of(LinearAction const& action, GroupElement const& g) {
  GroupSpec const& spec = action.spec();
  if (g.family() != spec.family()) {
    throw FamilyMismatch();
  }
  std::size_t const d = action.dim();
  switch (spec.family()) {
    case Family::Free: {
      Matrix m = Matrix::identity(d);
      for (int l : g.free_word().letters) {
        char const c = l > 0 ? static_cast<char>('a' + l - 1) : static_cast<char>('A' - l - 1);
        m = m * action.letter_matrix(c);
      }
      return m;
    }
    case Family::FreeAbelian: {
      Matrix m = Matrix::identity(d);
      auto const& e = g.exponents().exponents;
      for (std::size_t i = 0; i < e.size(); ++i) {
        m = m * power(action.letter_matrix(static_cast<char>('a' + i)), e[i]);
      }
      return m;
    }
    case Family::Heisenberg: {
      auto const& t = g.heisenberg();
      return power(action.letter_matrix('a'), t.a) * power(action.letter_matrix('b'), t.b) *
             power(action.letter_matrix('c'), t.c);
    }
    case Family::BaumslagSolitar: {
      auto const& pr = g.bs_pair();
      Integer den = pr.shift.get_den();
      std::int64_t s = 0;
      while (den != 1) {
        den /= static_cast<long>(spec.bs_n());
        ++s;
      }
      Integer const p = pr.shift.get_num();
      if (!p.fits_slong_p()) {
        throw DomainError("BS shift numerator too large");
      }
      Matrix const& a = action.letter_matrix('a');
      Matrix const& b = action.letter_matrix('b');
      return power(b, -s) * power(a, p.get_si()) * power(b, s + pr.level);
    }
  }
  return Matrix::identity(d);
}

std::vector<Matrix> ball_matrices(LinearAction const& action, CayleyBall const& ball) {
  if (!(ball.spec() == action.spec())) {
    throw FamilyMismatch();
  }
  std::vector<Matrix> gens = generator_matrices(action, ball.generators());
  std::vector<Matrix> out;
  out.reserve(ball.size());
  out.push_back(Matrix::identity(action.dim()));
  for (std::size_t i = 1; i < ball.size(); ++i) {
    auto const edge = ball.parent(i);
    out.push_back(gens[edge.generator] * out[edge.parent]);
  }
  return out;
}

std::vector<Matrix> generator_matrices(LinearAction const& action, GeneratingSet const& generators) {
  std::vector<Matrix> out;
  out.reserve(generators.size());
  for (auto const& s : generators) {
    out.push_back(matrix_of(action, s.element));
  }
  return out;
}

Point apply(LinearAction const& action, GroupElement const& g, Point const& x) {
  return matrix_of(action, g) * x;
}

AuxState aux_step(std::int64_t n, char letter, AuxState const& s) {
  switch (letter) {
    case 'a':
      return {s.x + power(Rational(static_cast<long>(n)), -s.k), s.k};
    case 'A':
      return {s.x - power(Rational(static_cast<long>(n)), -s.k), s.k};
    case 'b':
      return {s.x, s.k + 1};
    case 'B':
      return {s.x, s.k - 1};
    default:
      throw DomainError(std::string("letter '") + letter + "' is not a BS(1,n) generator");
  }
}

AuxState aux_apply(std::int64_t n, GroupElement const& g, AuxState const& s) {
  auto const& pr = g.bs_pair();
  std::int64_t const k = s.k + pr.level;
  return {s.x + pr.shift * power(Rational(static_cast<long>(n)), -k), k};
}

std::string to_string(HyperbolicType t) {
  switch (t) {
    case HyperbolicType::Expanding:
      return "expanding";
    case HyperbolicType::Contracting:
      return "contracting";
    case HyperbolicType::Saddle:
      return "saddle";
    case HyperbolicType::Nonhyperbolic:
      return "nonhyperbolic";
  }
  return {};
}

Hyperbolicity hyperbolic_type(Matrix const& m) {
  std::vector<Rational> values;
  if (m.dim() == 1) {
    values.push_back(m(0, 0));
  } else if (m.is_lower_triangular() || m.is_upper_triangular()) {
    values = {m(0, 0), m(1, 1)};
  } else {
    Rational const tr = m(0, 0) + m(1, 1);
    Rational const disc = tr * tr - 4 * m.determinant();
    auto const root = rational_sqrt(disc);
    if (!root) {
      throw DomainError("unsupported matrix " + format(m) + ": eigenvalues are not rational");
    }
    values = {Rational((tr + *root) / 2), Rational((tr - *root) / 2)};
  }

  Hyperbolicity h;
  bool has_unit = false;
  bool has_big = false;
  bool has_small = false;
  for (auto const& v : values) {
    Rational const mag = abs(v);
    Point const vec = eigenvector(m, v);
    h.eigenpairs.push_back({v, vec});
    Rational const stretch = mag > 1 ? mag : Rational(1 / mag);
    if (h.spectral_gap == 0 || stretch < h.spectral_gap) {
      h.spectral_gap = stretch;
    }
    if (mag == 1) {
      has_unit = true;
    } else if (mag > 1) {
      has_big = true;
      h.unstable.push_back(vec);
    } else {
      has_small = true;
      h.stable.push_back(vec);
    }
  }
  if (has_unit) {
    h.type = HyperbolicType::Nonhyperbolic;
  } else if (has_big && has_small) {
    h.type = HyperbolicType::Saddle;
  } else if (has_big) {
    h.type = HyperbolicType::Expanding;
  } else {
    h.type = HyperbolicType::Contracting;
  }
  return h;
}

}  // namespace shadowlab
