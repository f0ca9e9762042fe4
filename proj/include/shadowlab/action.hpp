#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "shadowlab/error.hpp"
#include "shadowlab/group.hpp"
#include "shadowlab/linalg.hpp"

namespace shadowlab {

// A linear action of a supported group on Q^d (d = 1 or 2): one invertible
// matrix per positive generator, with every defining relation verified exactly.
class LinearAction {
 public:
  GroupSpec const& spec() const noexcept { return spec_; }
  std::size_t dim() const noexcept { return dim_; }

  // Matrix of the positive generator with the given letter, or of its inverse
  // for the uppercase letter.
  Matrix const& letter_matrix(char letter) const;

  // Positive-generator matrices keyed by letter.
  std::map<std::string, Matrix> const& matrices() const noexcept { return matrices_; }

  // Max sup-norm operator norm over generator matrices and their inverses;
  // a Lipschitz constant for every f_s with s a letter.
  Rational const& continuity_bound() const noexcept { return continuity_bound_; }

  friend LinearAction load_action(GroupSpec const& spec, std::map<std::string, Matrix> const& matrices);

 private:
  LinearAction() = default;

  GroupSpec spec_ = GroupSpec::free_group(1);
  std::size_t dim_ = 0;
  std::map<std::string, Matrix> matrices_;
  std::vector<Matrix> positive_;
  std::vector<Matrix> inverse_;
  Rational continuity_bound_;
};

class RelationViolation : public Error {
 public:
  RelationViolation(Relation relation, std::vector<Rational> residual);

  Relation const& relation() const noexcept { return relation_; }
  // Row-major lhs - rhs.
  std::vector<Rational> const& residual() const noexcept { return residual_; }

 private:
  Relation relation_;
  std::vector<Rational> residual_;
};

// Throws DomainError for a missing/extra generator or mismatched dimensions and
// RelationViolation when a defining relation fails as a matrix identity.
LinearAction load_action(GroupSpec const& spec, std::map<std::string, Matrix> const& matrices);

// Product of letter matrices along a word (leftmost letter applied last).
Matrix word_matrix(LinearAction const& action, std::string_view word);

// Matrix of g along its normal-form spelling. BS(1,n) elements use
// B^-s A^p B^(s+m) with fast powers, so huge shifts stay cheap.
Matrix matrix_of(LinearAction const& action, GroupElement const& g);

// Matrix of every ball element, propagated along BFS parent edges.
std::vector<Matrix> ball_matrices(LinearAction const& action, CayleyBall const& ball);

// Matrices of the ball's generating set (composite generators included).
std::vector<Matrix> generator_matrices(LinearAction const& action, GeneratingSet const& generators);

Point apply(LinearAction const& action, GroupElement const& g, Point const& x);

// State (x, k) of the auxiliary action of BS(1,n) on R x Z:
//   g_a(x, k) = (x + n^-k, k),  g_b(x, k) = (x, k + 1).
struct AuxState {
  Rational x;
  std::int64_t k = 0;

  friend bool operator==(AuxState const& s, AuxState const& t) { return s.x == t.x && s.k == t.k; }
};

// One generator step; letter in {a, A, b, B}.
AuxState aux_step(std::int64_t n, char letter, AuxState const& s);

// Closed form: the pair (t, m) sends (x, k) to (x + t n^-(k+m), k + m).
AuxState aux_apply(std::int64_t n, GroupElement const& g, AuxState const& s);

enum class HyperbolicType { Expanding, Contracting, Saddle, Nonhyperbolic };

std::string to_string(HyperbolicType t);

struct Eigenpair {
  Rational value;
  Point vector;
};

struct Hyperbolicity {
  HyperbolicType type = HyperbolicType::Nonhyperbolic;
  std::vector<Eigenpair> eigenpairs;
  std::vector<Point> stable;    // eigenvectors with |value| < 1
  std::vector<Point> unstable;  // eigenvectors with |value| > 1
  // min over eigenvalues of max(|v|, 1/|v|); > 1 exactly when hyperbolic.
  Rational spectral_gap;
};

// Requires rational eigenvalues; throws DomainError otherwise.
Hyperbolicity hyperbolic_type(Matrix const& m);

}  // namespace shadowlab
