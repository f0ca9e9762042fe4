#include "shadowlab/io.hpp"

#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

#include "shadowlab/error.hpp"

namespace shadowlab {

namespace {

std::vector<std::string> split_tabs(std::string const& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t const tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

Rational json_rational(Json const& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  throw ParseError("expected a rational string", 0);
}

}  // namespace

Json matrix_to_json(Matrix const& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(format(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(Json const& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty array of rows", 0);
  std::size_t const d = j.size();
  std::vector<Rational> entries;
  for (auto const& row : j) {
    if (!row.is_array() || row.size() != d) throw ParseError("matrix must be square", 0);
    for (auto const& e : row) entries.push_back(json_rational(e));
  }
  return Matrix(d, std::move(entries));
}

Json point_to_json(Point const& p) {
  Json out = Json::array();
  for (auto const& c : p.coords()) out.push_back(format(c));
  return out;
}

Point point_from_json(Json const& j) {
  if (!j.is_array()) throw ParseError("point must be an array", 0);
  std::vector<Rational> c;
  for (auto const& e : j) c.push_back(json_rational(e));
  return Point(std::move(c));
}

Json action_to_json(LinearAction const& action) {
  Json m = Json::object();
  for (auto const& [k, v] : action.matrices()) m[k] = matrix_to_json(v);
  return Json{{"group", action.spec().descriptor()}, {"matrices", std::move(m)}};
}

LinearAction action_from_json(Json const& j) {
  GroupSpec const spec = parse_presentation(j.at("group").get<std::string>());
  std::map<std::string, Matrix> ms;
  for (auto const& [k, v] : j.at("matrices").items()) ms.emplace(k, matrix_from_json(v));
  return load_action(spec, ms);
}

Json halfplane_to_json(HalfPlane const& h) {
  return Json{{"a", format(h.a)},      {"b", format(h.b)},       {"c", format(h.c)},
              {"element", h.element}, {"coordinate", h.coordinate}, {"side", h.side > 0 ? "upper" : "lower"}};
}

Json verdict_to_json(FeasibilityVerdict const& v) {
  Json out{{"feasible", v.feasible}};
  if (v.feasible) {
    out["witness"] = point_to_json(*v.witness);
    out["strict_witness"] = v.strict_witness ? point_to_json(*v.strict_witness) : Json();
    out["region_vertices"] = v.region_vertices;
  } else {
    Json cert = Json::array();
    for (auto const& h : v.certificate) cert.push_back(halfplane_to_json(h));
    Json mult = Json::array();
    for (auto const& m : v.multipliers) mult.push_back(format(m));
    out["certificate"] = std::move(cert);
    out["multipliers"] = std::move(mult);
  }
  out["constraints_used"] = v.constraints;
  return out;
}

void write_trajectory(std::ostream& out, Pseudotrajectory const& traj, LinearAction const& action) {
  CayleyBall const& b = traj.ball();
  Json header{{"action", action_to_json(action)},
              {"generators", b.generators().labels()},
              {"radius", b.radius()},
              {"mode", to_string(traj.mode())},
              {"declared_d", format(traj.declared_d())},
              {"precision", traj.precision()}};
  out << '#' << header.dump() << '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << b.word(i);
    for (std::size_t c = 0; c < traj.dim(); ++c) {
      out << '\t';
      if (traj.mode() == NumericMode::Exact) {
        out << format(traj.point(i)[c]);
      } else {
        auto const& iv = traj.interval_point(i)[c];
        out << iv.lower_hex() << ':' << iv.upper_hex();
      }
    }
    out << '\n';
  }
}

LoadedTrajectory read_trajectory(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#') {
    throw ParseError("trajectory file must start with a '#' header line", 0);
  }
  Json header;
  try {
    header = Json::parse(line.substr(1));
  } catch (nlohmann::json::exception const& e) {
    throw ParseError(std::string("malformed header: ") + e.what(), 1);
  }
  LinearAction action = action_from_json(header.at("action"));
  GroupSpec const& spec = action.spec();
  GeneratingSet const gens = GeneratingSet::from_words(spec, header.at("generators").get<std::vector<std::string>>());
  auto ball_ptr = std::make_shared<CayleyBall const>(ball(spec, gens, header.at("radius").get<int>()));
  std::string const mode = header.at("mode").get<std::string>();
  Rational const declared = parse_rational(header.at("declared_d").get<std::string>());
  auto const precision = header.value("precision", static_cast<mpfr_prec_t>(Interval::kDefaultPrecision));
  bool const exact = mode == "exact";
  if (!exact && mode != "float") throw ParseError("unknown mode '" + mode + "'", 0);

  std::size_t const d = action.dim();
  std::vector<std::optional<Point>> pts(ball_ptr->size());
  std::vector<std::optional<IntervalPoint>> ivs(ball_ptr->size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto const fields = split_tabs(line);
    if (fields.size() != d + 1) {
      throw ParseError("expected " + std::to_string(d + 1) + " fields", line_no);
    }
    auto const idx = ball_ptr->index_of(evaluate_word(spec, fields[0]));
    if (!idx) throw ParseError("element '" + fields[0] + "' is outside the ball", line_no);
    if (pts[*idx] || ivs[*idx]) throw ParseError("duplicate element '" + fields[0] + "'", line_no);
    if (exact) {
      std::vector<Rational> c;
      for (std::size_t k = 1; k <= d; ++k) c.push_back(parse_rational(fields[k]));
      pts[*idx] = Point(std::move(c));
    } else {
      IntervalPoint p;
      for (std::size_t k = 1; k <= d; ++k) {
        auto const colon = fields[k].find(':');
        if (colon == std::string::npos) throw ParseError("interval needs 'lo:hi'", line_no);
        p.push_back(Interval::from_hex(fields[k].substr(0, colon), fields[k].substr(colon + 1), precision));
      }
      ivs[*idx] = std::move(p);
    }
  }
  for (std::size_t i = 0; i < ball_ptr->size(); ++i) {
    if (!pts[i] && !ivs[i]) throw ParseError("missing element '" + ball_ptr->word(i) + "'", line_no);
  }
  if (exact) {
    std::vector<Point> v;
    for (auto& p : pts) v.push_back(std::move(*p));
    return {std::move(action), Pseudotrajectory(ball_ptr, std::move(v), declared)};
  }
  std::vector<IntervalPoint> v;
  for (auto& p : ivs) v.push_back(std::move(*p));
  return {std::move(action), Pseudotrajectory(ball_ptr, std::move(v), declared, precision)};
}

void save_trajectory(std::string const& path, Pseudotrajectory const& traj, LinearAction const& action) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_trajectory(out, traj, action);
  if (!out) throw Error("failed writing '" + path + "'");
}

LoadedTrajectory load_trajectory(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_trajectory(in);
}

}  // namespace shadowlab
