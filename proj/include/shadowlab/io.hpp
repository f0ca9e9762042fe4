#pragma once

// Text formats: action descriptors and verdicts as JSON, pseudotrajectories
// as tab-separated records.
//
// Trajectory file: the first line is "#" followed by a JSON header with the
// action descriptor, generating set, radius, mode, declared d and precision.
// Every other line is "word<TAB>p1<TAB>p2" with canonical rationals, or in
// float mode "word<TAB>lo:hi<TAB>lo:hi" with hexadecimal MPFR endpoints.
// Exact-mode files round-trip bit for bit.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "shadowlab/action.hpp"
#include "shadowlab/pseudo.hpp"
#include "shadowlab/shadow.hpp"

namespace shadowlab {

using Json = nlohmann::ordered_json;

// {"group": "BS(1,2)", "matrices": {"a": [["1","0"],["1","1"]], ...}}
Json action_to_json(LinearAction const& action);
LinearAction action_from_json(Json const& j);

Json matrix_to_json(Matrix const& m);
Matrix matrix_from_json(Json const& j);
Json point_to_json(Point const& p);
Point point_from_json(Json const& j);

Json halfplane_to_json(HalfPlane const& h);
// {"feasible": true, "witness": [...]} or {"feasible": false, "certificate": [...]}
Json verdict_to_json(FeasibilityVerdict const& v);

struct LoadedTrajectory {
  LinearAction action;
  Pseudotrajectory trajectory;
};

void write_trajectory(std::ostream& out, Pseudotrajectory const& traj, LinearAction const& action);
// Throws ParseError for malformed records, missing or duplicate elements.
LoadedTrajectory read_trajectory(std::istream& in);

void save_trajectory(std::string const& path, Pseudotrajectory const& traj, LinearAction const& action);
LoadedTrajectory load_trajectory(std::string const& path);

}  // namespace shadowlab
