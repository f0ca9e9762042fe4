#pragma once

// Reference implementations that share no code paths with the library's
// normal forms, ball construction or polygon clipping.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "shadowlab/experiments.hpp"
#include "shadowlab/shadow.hpp"

namespace oracle {

using shadowlab::Rational;

// Cancels adjacent x X pairs until none remain; "" for the identity.
std::string reduce_free(std::string const& word);

// BS(1,n) as affine maps x -> scale * x + shift, composed left to right.
struct Affine {
  Rational scale = 1;
  Rational shift = 0;
  friend bool operator==(Affine const&, Affine const&) = default;
};
Affine bs_word(std::int64_t n, std::string const& word);

// Heisenberg as 3x3 upper unitriangular integer matrices; returns (i, j, k)
// with the element a^i b^j c^k.
std::array<std::int64_t, 3> heis_word(std::string const& word);

// Word norm by BFS over affine maps; nullopt beyond max_radius.
std::optional<int> bs_norm(std::int64_t n, Affine const& target, int max_radius);

// Ball size by BFS over words reduced in the free group / Z^k exponent vectors.
std::size_t free_ball_size(int rank, int radius);
std::size_t abelian_ball_size(int rank, int radius);

// Feasibility of a bounded system by enumerating every pairwise line
// intersection (2D) or every endpoint (1D).
std::optional<shadowlab::Point> lp_feasible(std::vector<shadowlab::HalfPlane> const& constraints, std::size_t dim);

// max dist(y_sg, f_s(y_g)) recomputed with multiply / index_of / apply.
Rational naive_defect(shadowlab::Pseudotrajectory const& traj, shadowlab::LinearAction const& action,
                      shadowlab::GeneratingSet const& generators);

}  // namespace oracle
