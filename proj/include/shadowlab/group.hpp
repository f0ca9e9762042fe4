#pragma once

// Normal forms, multiplication, word metrics and Cayley balls for the four
// supported families: free groups F(k), free abelian groups Z^k, the discrete
// Heisenberg group and the solvable Baumslag-Solitar groups BS(1,n).
//
// Words are strings over one letter per generator: the i-th generator is the
// i-th lowercase letter and its inverse the matching uppercase letter. The
// string "e" denotes the identity. A word evaluates left to right, so "ab"
// is the product a*b and acts on points as f_a(f_b(x)).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "shadowlab/rational.hpp"

namespace shadowlab {

enum class Family { Free, FreeAbelian, Heisenberg, BaumslagSolitar };

// Reduced word; letter +i / -i (i >= 1) is generator i or its inverse.
struct FreeWord {
  std::vector<int> letters;
};

struct ExponentVector {
  std::vector<std::int64_t> exponents;
};

// a^i b^j c^k with c = [a,b] central.
struct HeisenbergTriple {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
};

// The affine map x -> n^level * x + shift; a = (1, 0), b = (0, 1).
// shift lies in Z[1/n].
struct BSPair {
  Rational shift;
  std::int64_t level = 0;
};

class GroupElement {
 public:
  using Payload = std::variant<FreeWord, ExponentVector, HeisenbergTriple, BSPair>;

  GroupElement() = default;
  explicit GroupElement(Payload payload) : payload_(std::move(payload)) {}

  Family family() const noexcept { return static_cast<Family>(payload_.index()); }
  Payload const& payload() const noexcept { return payload_; }

  FreeWord const& free_word() const { return std::get<FreeWord>(payload_); }
  ExponentVector const& exponents() const { return std::get<ExponentVector>(payload_); }
  HeisenbergTriple const& heisenberg() const { return std::get<HeisenbergTriple>(payload_); }
  BSPair const& bs_pair() const { return std::get<BSPair>(payload_); }

  // Total order: family, then lexicographic on the normal form.
  friend std::strong_ordering operator<=>(GroupElement const& x, GroupElement const& y);
  friend bool operator==(GroupElement const& x, GroupElement const& y) {
    return (x <=> y) == std::strong_ordering::equal;
  }

 private:
  Payload payload_;
};

struct ElementHash {
  std::size_t operator()(GroupElement const& g) const noexcept;
};

// A pair of words that must evaluate to the same element.
struct Relation {
  std::string lhs;
  std::string rhs;
};

struct Generator {
  std::string label;  // a word over the base letters
  GroupElement element;
};

class GroupSpec;

// Finite symmetric generating set; construction checks symmetry.
class GeneratingSet {
 public:
  GeneratingSet() = default;
  GeneratingSet(GroupSpec const& spec, std::vector<Generator> generators);

  // Builds from words, e.g. {"a", "A", "b", "B", "ab", "BA"}.
  static GeneratingSet from_words(GroupSpec const& spec, std::vector<std::string> const& words);

  std::size_t size() const noexcept { return generators_.size(); }
  Generator const& operator[](std::size_t i) const { return generators_[i]; }
  auto begin() const { return generators_.begin(); }
  auto end() const { return generators_.end(); }

  // Index of s^-1 within the set.
  std::size_t inverse_index(std::size_t i) const { return inverse_[i]; }
  std::optional<std::size_t> index_of(GroupElement const& g) const;
  std::vector<std::string> labels() const;

 private:
  std::vector<Generator> generators_;
  std::vector<std::size_t> inverse_;
};

class GroupSpec {
 public:
  static GroupSpec free_group(int rank);
  static GroupSpec free_abelian(int rank);
  static GroupSpec heisenberg();
  static GroupSpec baumslag_solitar(std::int64_t n);

  Family family() const noexcept { return family_; }
  // Number of positive generators.
  int rank() const noexcept { return rank_; }
  // n of BS(1,n); 0 for other families.
  std::int64_t bs_n() const noexcept { return bs_n_; }

  std::vector<Relation> const& relations() const noexcept { return relations_; }
  GeneratingSet const& default_generators() const noexcept { return generators_; }

  // Presentation string accepted by parse_presentation.
  std::string descriptor() const;

  GroupElement identity() const;
  // Positive generator i (0-based).
  GroupElement generator(int i) const;
  GroupElement letter(char c) const;

  friend bool operator==(GroupSpec const& x, GroupSpec const& y) {
    return x.family_ == y.family_ && x.rank_ == y.rank_ && x.bs_n_ == y.bs_n_;
  }

 private:
  GroupSpec(Family family, int rank, std::int64_t bs_n);

  Family family_ = Family::Free;
  int rank_ = 0;
  std::int64_t bs_n_ = 0;
  std::vector<Relation> relations_;
  GeneratingSet generators_;
};

// "F(k)", "Z^k", "Heis" or "BS(1,n)". Throws ParseError or DomainError.
GroupSpec parse_presentation(std::string_view text);

GroupElement multiply(GroupSpec const& spec, GroupElement const& g, GroupElement const& h);
GroupElement inverse(GroupSpec const& spec, GroupElement const& g);
GroupElement commutator(GroupSpec const& spec, GroupElement const& g, GroupElement const& h);
GroupElement power(GroupSpec const& spec, GroupElement const& g, std::int64_t k);
bool is_identity(GroupElement const& g);

// Product of the letters of a word ("e" is the identity).
GroupElement evaluate_word(GroupSpec const& spec, std::string_view word);
// Word or, for BS(1,n), a "(p/q, m)" pair.
GroupElement parse_element(GroupSpec const& spec, std::string_view text);
// A word spelling the normal form (for BS: b^-s a^p b^(s+m) with shift p/n^s).
std::string spell(GroupSpec const& spec, GroupElement const& g);
// Compact display: the spelling, except BS pairs print as "(p/q, m)".
std::string format(GroupSpec const& spec, GroupElement const& g);

// Ball size limit; the SHADOWLAB_CAP environment variable overrides 2'000'000.
std::size_t default_ball_cap();

// Exact word norms by breadth-first search, memoized across queries.
class WordMetric {
 public:
  WordMetric(GroupSpec spec, GeneratingSet generators, std::size_t size_cap = default_ball_cap());

  // Throws CapExceeded("norm exceeds cap") when |g| > max_radius.
  int norm(GroupElement const& g, int max_radius);

 private:
  void expand();

  GroupSpec spec_;
  GeneratingSet generators_;
  std::size_t size_cap_;
  std::unordered_map<GroupElement, int, ElementHash> norms_;
  std::vector<GroupElement> frontier_;
  int explored_radius_ = 0;
};

int word_norm(GroupSpec const& spec, GroupElement const& g, GeneratingSet const& generators,
              int max_radius);

// Elements of word norm <= radius, ordered by norm then by normal form.
class CayleyBall {
 public:
  // element(i) == generators[generator] * element(parent).
  struct ParentEdge {
    std::size_t parent = 0;
    std::size_t generator = 0;
  };

  GroupSpec const& spec() const noexcept { return spec_; }
  GeneratingSet const& generators() const noexcept { return generators_; }
  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return elements_.size(); }

  GroupElement const& element(std::size_t i) const { return elements_[i]; }
  int norm(std::size_t i) const { return norms_[i]; }
  // Undefined for the identity (index 0).
  ParentEdge parent(std::size_t i) const { return parents_[i]; }
  std::optional<std::size_t> index_of(GroupElement const& g) const;
  bool contains(GroupElement const& g) const { return index_of(g).has_value(); }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  // Index of generators[s] * element(i), or npos when it leaves the ball.
  std::size_t neighbor(std::size_t i, std::size_t s) const { return neighbors_[i * generators_.size() + s]; }

  // Geodesic spelling from the parent chain; "e" for the identity.
  std::string word(std::size_t i) const;
  // Generator indices s_k, ..., s_1 with element(i) = s_k ... s_1.
  std::vector<std::size_t> spelling(std::size_t i) const;

  friend CayleyBall ball(GroupSpec const& spec, GeneratingSet const& generators, int radius,
                         std::size_t cap);

 private:
  GroupSpec spec_ = GroupSpec::free_group(1);
  GeneratingSet generators_;
  int radius_ = 0;
  std::vector<GroupElement> elements_;
  std::vector<int> norms_;
  std::vector<ParentEdge> parents_;
  std::vector<std::size_t> neighbors_;
  std::unordered_map<GroupElement, std::size_t, ElementHash> index_;
};

CayleyBall ball(GroupSpec const& spec, GeneratingSet const& generators, int radius,
                std::size_t cap = default_ball_cap());

struct BilipschitzReport {
  std::vector<std::string> generators;        // S
  std::vector<std::string> other_generators;  // S'
  Rational constant = 1;                      // C
  int radius = 0;
  std::string witness;  // element attaining C (first in ball order)
  int witness_norm = 0;
  int witness_other_norm = 0;
  std::size_t checked = 0;
  bool verified = false;  // |g|_S' / C <= |g|_S <= C |g|_S' on the whole ball
};

// C over the radius-R ball of S. Throws CapExceeded when S' does not
// generate S within `search_cap` letters (and vice versa).
BilipschitzReport bilipschitz_constant(GroupSpec const& spec, GeneratingSet const& s,
                                       GeneratingSet const& s_prime, int radius,
                                       int search_cap = 16);

}  // namespace shadowlab
