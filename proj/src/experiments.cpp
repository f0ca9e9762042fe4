#include "shadowlab/experiments.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "shadowlab/error.hpp"
#include "shadowlab/shadow.hpp"

namespace shadowlab {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(Rational const& q) { return format(q); }

std::string point_text(Point const& p) {
  std::string out;
  for (std::size_t i = 0; i < p.dim(); ++i) out += (i ? " " : "") + format(p[i]);
  return out;
}

std::string certificate_words(FeasibilityVerdict const& v) {
  std::string out;
  for (std::size_t i = 0; i < v.certificate.size(); ++i) out += (i ? ";" : "") + v.certificate[i].element;
  return out;
}

std::shared_ptr<CayleyBall const> make_ball(GroupSpec const& spec, GeneratingSet const& gens, int radius) {
  return std::make_shared<CayleyBall const>(ball(spec, gens, radius));
}

std::string artifact_path(ExperimentConfig const& c, std::string const& name) {
  std::filesystem::create_directories(c.output_dir);
  return (std::filesystem::path(c.output_dir) / (to_string(c.id) + "_" + name)).string();
}

// Decides one problem and checks the verdict by substitution or by the
// independent certificate test.
struct CheckedVerdict {
  FeasibilityVerdict verdict;
  bool verified = false;
};

CheckedVerdict decide(ShadowingProblem const& problem) {
  auto const constraints = shadow_constraints(problem);
  CheckedVerdict out{feasible_region(constraints, problem.dim()), false};
  auto const& v = out.verdict;
  if (v.feasible) {
    out.verified = verify_witness(constraints, *v.witness) &&
                   (!v.strict_witness || std::all_of(constraints.begin(), constraints.end(), [&](HalfPlane const& h) {
                     return h.strictly_satisfied(*v.strict_witness);
                   }));
  } else {
    out.verified = v.certificate.size() <= 3 && verify_certificate(v.certificate, problem.dim()) &&
                   verify_multipliers(v.certificate, v.multipliers);
  }
  return out;
}

// One seed or one radius. Items are computed concurrently and merged in
// index order, so reports do not depend on scheduling.
struct Item {
  Json json;
  std::vector<std::string> csv;
  bool ok = true;
  bool infeasible = false;
  bool predicted = false;
  std::vector<std::string> artifacts;
};

template <class F>
std::vector<Item> parallel_items(int count, F const& make) {
  std::vector<std::future<Item>> futures;
  for (int i = 0; i < count; ++i) futures.push_back(std::async(std::launch::async, make, i));
  std::vector<Item> out;
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

void merge(ExperimentReport& rep, std::vector<Item>& items, char const* key) {
  Json arr = Json::array();
  for (auto& it : items) {
    arr.push_back(std::move(it.json));
    rep.csv_rows.push_back(std::move(it.csv));
    for (auto& a : it.artifacts) rep.artifacts.push_back(std::move(a));
  }
  rep.results[key] = std::move(arr);
}

Json verdict_summary(CheckedVerdict const& c) {
  Json j = verdict_to_json(c.verdict);
  j["verified"] = c.verified;
  return j;
}

Json edge_json(CayleyBall const& b, Edge const& e) {
  return Json{{"from", b.word(e.from)}, {"generator", b.generators()[e.generator].label}, {"to", b.word(e.to)}};
}

Json defect_json(DefectReport const& r, CayleyBall const& b) {
  Json j{{"mode", to_string(r.mode)}, {"value", fmt(r.value)}};
  if (r.enclosure) {
    j["enclosure"] = {r.enclosure->lower_hex(), r.enclosure->upper_hex()};
    j["rounding_bound"] = fmt(r.enclosure->width());
  }
  if (r.worst) j["worst_edge"] = edge_json(b, *r.worst);
  j["interior_edges"] = r.interior_edges;
  j["skipped_edges"] = r.skipped_edges;
  return j;
}

// ---------------------------------------------------------------------------
// E1: the counterexample pseudotrajectory of BS(1,n) for lambda in (1, n].

void run_e1(ExperimentConfig const& c, ExperimentReport& rep) {
  rep.expectation = "max defect < d and infeasible for every radius from a threshold on";
  LinearAction const action = bs_action(c.n, c.lambda);
  GroupSpec const& spec = action.spec();
  CounterexampleParams const params{c.n, c.lambda, c.d, c.mode, c.precision};

  auto const big = make_ball(spec, spec.default_generators(), c.radius_max);
  Pseudotrajectory const traj = bs_counterexample(params, big);
  DefectReport const def = max_defect(traj, action);
  bool ok = def.value < c.d;
  rep.results["defect"] = defect_json(def, *big);
  rep.results["defect"]["radius"] = c.radius_max;
  rep.results["defect"]["below_d"] = def.value < c.d;
  if (!c.output_dir.empty()) {
    rep.artifacts.push_back(artifact_path(c, "trajectory.tsv"));
    save_trajectory(rep.artifacts.back(), traj, action);
  }

  if (c.mode == NumericMode::Float) {
    rep.notes.push_back("float mode: defects are rigorous interval bounds; feasibility is decided in exact mode only");
    rep.passed = ok;
    return;
  }

  // beta = 1: a-edges obey |P1| <= 2d/3, |P2| <= d/3; b-edges are exact.
  Rational a1 = 0, a2 = 0, bmax = 0;
  for (auto const& r : edge_residuals(traj, action)) {
    char const letter = big->generators()[r.edge.generator].label[0];
    if (letter == 'a' || letter == 'A') {
      a1 = std::max(a1, abs(r.residual[0]));
      a2 = std::max(a2, abs(r.residual[1]));
    } else {
      bmax = std::max(bmax, sup_norm(r.residual));
    }
  }
  Rational const p1_bound = 2 * c.d / 3;
  Rational const p2_bound = c.d / 3;
  bool const bounds_ok = a1 <= p1_bound && a2 <= p2_bound && bmax == 0;
  ok = ok && bounds_ok;
  rep.results["edge_bounds"] = {{"a_edge_max_p1", fmt(a1)}, {"p1_bound", fmt(p1_bound)},
                                {"a_edge_max_p2", fmt(a2)}, {"p2_bound", fmt(p2_bound)},
                                {"b_edge_max", fmt(bmax)},  {"hold", bounds_ok}};
  rep.results["first_coordinate_constant"] = fmt(p1_bound);

  rep.csv_header = {"R", "ball_size", "feasible", "certificate", "witness", "verified"};
  auto items = parallel_items(c.radius_max - c.radius_min + 1, [&](int i) {
    int const r = c.radius_min + i;
    auto const b = make_ball(spec, spec.default_generators(), r);
    CheckedVerdict const cv = decide(ShadowingProblem(action, bs_counterexample(params, b), c.epsilon));
    Item it;
    it.ok = cv.verified;
    it.infeasible = !cv.verdict.feasible;
    it.json = verdict_summary(cv);
    it.json["R"] = r;
    it.json["ball_size"] = b->size();
    it.csv = {std::to_string(r), std::to_string(b->size()), cv.verdict.feasible ? "true" : "false",
              certificate_words(cv.verdict), cv.verdict.witness ? point_text(*cv.verdict.witness) : "",
              cv.verified ? "true" : "false"};
    return it;
  });
  bool const all_verified = std::all_of(items.begin(), items.end(), [](Item const& it) { return it.ok; });
  std::optional<int> threshold;
  for (int i = static_cast<int>(items.size()) - 1; i >= 0 && items[static_cast<std::size_t>(i)].infeasible; --i) {
    threshold = c.radius_min + i;
  }
  merge(rep, items, "sweep");
  rep.results["threshold_radius"] = threshold ? Json(*threshold) : Json();
  rep.results["all_verdicts_verified"] = all_verified;
  rep.notes.push_back("the closed system dist <= eps is decided; strict witnesses are reported separately");
  rep.passed = ok && all_verified && threshold.has_value();
}

// ---------------------------------------------------------------------------
// E2: lambda > n, perturbed orbits are shadowed; fiber boxes along b^k.

void run_e2(ExperimentConfig const& c, ExperimentReport& rep) {
  rep.expectation = "every seeded perturbed orbit is feasible; fiber box width <= 2 eps / lambda_min^K";
  LinearAction const action = bs_action(c.n, c.lambda);
  GroupSpec const& spec = action.spec();
  auto const b = make_ball(spec, spec.default_generators(), c.radius);
  Matrix const& mb = action.letter_matrix('b');
  Rational const lambda_min = std::min(abs(mb(0, 0)), abs(mb(1, 1)));
  Rational const width_bound = 2 * c.epsilon / power(lambda_min, c.window);

  std::vector<std::size_t> b_powers;
  for (int k = 0; k <= c.window; ++k) {
    b_powers.push_back(*b->index_of(power(spec, spec.letter('b'), k)));
  }

  rep.csv_header = {"seed", "max_defect", "epsilon", "feasible", "witness", "box_width", "width_bound", "verified"};
  auto items = parallel_items(c.seeds, [&](int i) {
    std::uint64_t const seed = c.seed + static_cast<std::uint64_t>(i);
    Item it;
    Pseudotrajectory traj = perturbed_orbit(action, b, c.x0, c.d, seed);
    DefectReport const def = max_defect(traj, action);
    std::vector<Point> window;
    for (auto idx : b_powers) window.push_back(traj.point(idx));
    if (i == 0 && !c.output_dir.empty()) {
      it.artifacts.push_back(artifact_path(c, "trajectory_seed" + std::to_string(seed) + ".tsv"));
      save_trajectory(it.artifacts.back(), traj, action);
    }
    CheckedVerdict const cv = decide(ShadowingProblem(action, std::move(traj), c.epsilon));
    Box const box = fiber_shadow_expanding(mb, window, c.epsilon);
    bool const width_ok = !box.empty() && box.width() <= width_bound;
    bool const contains = cv.verdict.witness && box.contains(*cv.verdict.witness);
    it.ok = def.value < c.d && cv.verdict.feasible && cv.verified && width_ok && contains;
    it.json = {{"seed", seed},
               {"max_defect", fmt(def.value)},
               {"verdict", verdict_summary(cv)},
               {"box_width", fmt(box.width())},
               {"box_contains_witness", contains},
               {"ok", it.ok}};
    it.csv = {std::to_string(seed), fmt(def.value), fmt(c.epsilon), cv.verdict.feasible ? "true" : "false",
              cv.verdict.witness ? point_text(*cv.verdict.witness) : "", fmt(box.width()), fmt(width_bound),
              cv.verified ? "true" : "false"};
    return it;
  });
  bool const ok = std::all_of(items.begin(), items.end(), [](Item const& it) { return it.ok; });
  merge(rep, items, "runs");

  // b^k a = a^(n^k) b^k on normal forms.
  Json relation = Json::array();
  bool relation_ok = true;
  for (int k = 1; k <= c.window; ++k) {
    std::int64_t nk = 1;
    for (int j = 0; j < k; ++j) nk *= c.n;
    GroupElement const bk = power(spec, spec.letter('b'), k);
    GroupElement const lhs = multiply(spec, bk, spec.letter('a'));
    GroupElement const rhs = multiply(spec, power(spec, spec.letter('a'), nk), bk);
    relation_ok = relation_ok && lhs == rhs;
    relation.push_back({{"k", k}, {"holds", lhs == rhs}});
  }
  rep.results["width_bound"] = fmt(width_bound);
  rep.results["relation_bka"] = std::move(relation);
  rep.results["perturbation_amplitude"] = fmt(perturbation_amplitude(action, b->generators(), c.d));
  rep.notes.push_back("finite window only: feasibility on the radius-" + std::to_string(c.radius) +
                      " ball, not the infinite-group statement");
  rep.passed = ok && relation_ok;
}

// ---------------------------------------------------------------------------
// E3: F(2) two-branch pseudotrajectory against an expansive f_a.

LinearAction free_saddle_shear_action() {
  return load_action(GroupSpec::free_group(2), {{"a", Matrix::diagonal({2, Rational(1, 2)})},
                                                {"b", Matrix(2, {1, 1, 0, 1})}});
}

void run_e3(ExperimentConfig const& c, ExperimentReport& rep) {
  rep.expectation = "infeasible at every radius whose expansivity margin exceeds eps";
  LinearAction const action = free_saddle_shear_action();
  GroupSpec const& spec = action.spec();
  GroupElement const g = spec.letter('a');
  char const q = 'b';
  Matrix const fg = matrix_of(action, g);
  Rational const mu = hyperbolic_type(fg).spectral_gap;
  Rational const lq = action.letter_matrix(q).operator_norm();
  TwoBranchParams const params{g, q, Point{Rational(0), Rational(0)}, Point{c.d, Rational(0)}};

  rep.results["spectral_gap"] = fmt(mu);
  rep.results["q_lipschitz"] = fmt(lq);
  rep.results["separation"] = fmt(c.d);

  // Defects sit only on the edges between e and q.
  {
    auto const b = make_ball(spec, spec.default_generators(), std::max(c.radius_max, 1));
    Pseudotrajectory const traj = free_two_branch(action, params, b);
    std::vector<std::string> defective;
    for (auto const& r : edge_residuals(traj, action)) {
      if (sup_norm(r.residual) != 0) {
        defective.push_back(b->word(r.edge.from) + "->" + b->word(r.edge.to));
      }
    }
    DefectReport const def = max_defect(traj, action);
    bool const edges_ok = defective == std::vector<std::string>{"e->b", "b->e"} ||
                          defective == std::vector<std::string>{"b->e", "e->b"};
    rep.results["defect"] = defect_json(def, *b);
    rep.results["defective_edges"] = defective;
    rep.results["defective_edges_ok"] = edges_ok;
    rep.results["declared_d"] = fmt(traj.declared_d());
    rep.results["defect_equals_declared"] = def.value == traj.declared_d();
  }

  rep.csv_header = {"R", "ball_size", "margin", "predicted_infeasible", "feasible", "certificate", "verified"};
  int const r0 = std::max(c.radius_min, 1);
  auto items = parallel_items(c.radius_max - r0 + 1, [&](int i) {
    int const r = r0 + i;
    Item it;
    auto const b = make_ball(spec, spec.default_generators(), r);
    Pseudotrajectory traj = free_two_branch(action, params, b);
    if (!c.output_dir.empty() && r == c.radius_max && b->size() <= 20'000) {
      it.artifacts.push_back(artifact_path(c, "trajectory.tsv"));
      save_trajectory(it.artifacts.back(), traj, action);
    }
    CheckedVerdict const cv = decide(ShadowingProblem(action, std::move(traj), c.epsilon));
    Rational const margin = c.d * power(mu, r - 1) / (lq + 1);
    it.predicted = c.epsilon < margin;
    it.infeasible = !cv.verdict.feasible;
    it.ok = cv.verified && (!it.predicted || it.infeasible);
    it.json = verdict_summary(cv);
    it.json["R"] = r;
    it.json["margin"] = fmt(margin);
    it.json["predicted_infeasible"] = it.predicted;
    it.csv = {std::to_string(r), std::to_string(b->size()), fmt(margin), it.predicted ? "true" : "false",
              cv.verdict.feasible ? "true" : "false", certificate_words(cv.verdict), cv.verified ? "true" : "false"};
    return it;
  });
  bool ok = rep.results["defective_edges_ok"].get<bool>() && rep.results["defect_equals_declared"].get<bool>();
  bool any_predicted = false;
  std::optional<int> first_infeasible;
  for (std::size_t i = 0; i < items.size(); ++i) {
    ok = ok && items[i].ok;
    any_predicted = any_predicted || items[i].predicted;
    if (items[i].infeasible && !first_infeasible) first_infeasible = r0 + static_cast<int>(i);
  }
  merge(rep, items, "sweep");
  rep.results["first_infeasible_radius"] = first_infeasible ? Json(*first_infeasible) : Json();
  rep.notes.push_back("margin at radius R is separation * gap^(R-1) / (|f_q| + 1): below it the window forces "
                      "x_e near f_q^-1(omega0) and f_q(x_e) near omega at once");
  rep.passed = ok && any_predicted;
}

// ---------------------------------------------------------------------------
// E4: lifting a non-shadowable Z-window of f_g to F(2).

void run_e4(ExperimentConfig const& c, ExperimentReport& rep) {
  rep.expectation = "lift defect <= amplification * window defect; infeasible wherever the Z-window is";
  GroupSpec const spec = GroupSpec::free_group(2);
  LinearAction const action =
      load_action(spec, {{"a", Matrix(2, {1, 0, 1, 1})}, {"b", Matrix::identity(2)}});
  GroupElement const g = evaluate_word(spec, "ab");
  Matrix const mg = matrix_of(action, g);
  Matrix const mg_inv = mg.inverse();
  auto const r_len = static_cast<int>(g.free_word().letters.size());

  // x_{k+1} = M x_k + (delta, 0): a delta-pseudotrajectory drifting along P1.
  int const kmax = c.radius_max / r_len + 1;
  Point const kick{c.d, Rational(0)};
  std::vector<Point> forward{Point{Rational(0), Rational(0)}};
  for (int k = 1; k <= kmax; ++k) forward.push_back(mg * forward.back() + kick);
  std::vector<Point> backward;
  Point cur = forward.front();
  for (int k = 1; k <= kmax; ++k) {
    cur = mg_inv * (cur - kick);
    backward.push_back(cur);
  }
  ZWindow window{-kmax, {}};
  for (auto it = backward.rbegin(); it != backward.rend(); ++it) window.points.push_back(*it);
  for (auto const& p : forward) window.points.push_back(p);

  Rational const wdef = window_defect(mg, window);
  Rational const amp = lift_amplification(action, g);
  rep.results["window_defect"] = fmt(wdef);
  rep.results["amplification"] = fmt(amp);
  rep.results["g"] = "ab";

  GroupSpec const zspec = GroupSpec::free_abelian(1);
  LinearAction const zaction = load_action(zspec, {{"a", mg}});

  rep.csv_header = {"R", "K", "lift_defect", "bound", "window_feasible", "lift_feasible", "certificate", "verified"};
  int const r0 = std::max(c.radius_min, 1);
  auto items = parallel_items(c.radius_max - r0 + 1, [&](int i) {
    int const r = r0 + i;
    Item it;
    auto const b = make_ball(spec, spec.default_generators(), r);
    Pseudotrajectory traj = lift_Z_to_free(action, g, window, b);
    DefectReport const def = max_defect(traj, action);
    bool const defect_ok = def.value <= amp * wdef;
    if (!c.output_dir.empty() && r == c.radius_max && b->size() <= 20'000) {
      it.artifacts.push_back(artifact_path(c, "trajectory.tsv"));
      save_trajectory(it.artifacts.back(), traj, action);
    }
    CheckedVerdict const cv = decide(ShadowingProblem(action, std::move(traj), c.epsilon));

    int const k = r / r_len;
    auto const zb = make_ball(zspec, zspec.default_generators(), k);
    std::vector<Point> zpts;
    for (std::size_t i = 0; i < zb->size(); ++i) zpts.push_back(window.at(zb->element(i).exponents().exponents[0]));
    CheckedVerdict const zv = decide(ShadowingProblem(zaction, Pseudotrajectory(zb, std::move(zpts), wdef), c.epsilon));

    bool const implication = zv.verdict.feasible || !cv.verdict.feasible;
    it.infeasible = !cv.verdict.feasible;
    it.ok = defect_ok && cv.verified && zv.verified && implication;
    it.json = {{"R", r},
               {"K", k},
               {"lift_defect", fmt(def.value)},
               {"defect_ok", defect_ok},
               {"window_verdict", verdict_summary(zv)},
               {"lift_verdict", verdict_summary(cv)}};
    it.csv = {std::to_string(r), std::to_string(k), fmt(def.value), fmt(amp * wdef),
              zv.verdict.feasible ? "true" : "false", cv.verdict.feasible ? "true" : "false",
              certificate_words(cv.verdict), (cv.verified && zv.verified) ? "true" : "false"};
    return it;
  });
  bool const ok = std::all_of(items.begin(), items.end(), [](Item const& it) { return it.ok; });
  bool const any_infeasible = std::any_of(items.begin(), items.end(), [](Item const& it) { return it.infeasible; });
  merge(rep, items, "sweep");
  rep.passed = ok && any_infeasible;
}

// ---------------------------------------------------------------------------
// E5: Z^2 by commuting saddles; fiber points along <a> assemble into an orbit.

void run_e5(ExperimentConfig const& c, ExperimentReport& rep) {
  rep.expectation = "every seed feasible; coherence defect strictly decreases when the window doubles";
  GroupSpec const spec = GroupSpec::free_abelian(2);
  LinearAction const action = load_action(
      spec, {{"a", Matrix::diagonal({2, Rational(1, 2)})}, {"b", Matrix::diagonal({3, Rational(1, 3)})}});
  Matrix const& fa = action.letter_matrix('a');
  auto const b = make_ball(spec, spec.default_generators(), c.radius);
  auto const fb = make_ball(spec, spec.default_generators(), c.fiber_radius);
  int const k1 = c.window;
  int const k2 = 2 * c.window;

  // Ball index of a^k q for every fiber element q and |k| <= k2.
  std::vector<std::vector<std::size_t>> rows(fb->size());
  for (std::size_t i = 0; i < fb->size(); ++i) {
    for (int k = -k2; k <= k2; ++k) {
      GroupElement const h = multiply(spec, power(spec, spec.letter('a'), k), fb->element(i));
      rows[i].push_back(*b->index_of(h));
    }
  }

  rep.csv_header = {"seed", "feasible", "verified", "coherence_K", "coherence_2K", "decreased"};
  auto items = parallel_items(c.seeds, [&](int s) {
    std::uint64_t const seed = c.seed + static_cast<std::uint64_t>(s);
    Item it;
    Pseudotrajectory traj = perturbed_orbit(action, b, c.x0, c.d, seed);
    auto coherence = [&](int k) -> std::optional<CoherenceReport> {
      std::vector<Point> fibers;
      for (std::size_t i = 0; i < fb->size(); ++i) {
        ZWindow w{-k, {}};
        for (int j = -k; j <= k; ++j) w.points.push_back(traj.point(rows[i][static_cast<std::size_t>(j + k2)]));
        Box const box = fiber_shadow_hyperbolic(fa, w, c.epsilon);
        if (box.empty()) return std::nullopt;
        fibers.push_back(box.center());
      }
      return coherence_check(action, *fb, fibers);
    };
    auto const c1 = coherence(k1);
    auto const c2 = coherence(k2);
    CheckedVerdict const cv = decide(ShadowingProblem(action, std::move(traj), c.epsilon));
    bool const decreased = c1 && c2 && c2->value < c1->value;
    it.ok = cv.verdict.feasible && cv.verified && decreased;
    it.json = {{"seed", seed},
               {"verdict", verdict_summary(cv)},
               {"coherence_K", c1 ? Json(fmt(c1->value)) : Json()},
               {"coherence_2K", c2 ? Json(fmt(c2->value)) : Json()},
               {"decreased", decreased}};
    it.csv = {std::to_string(seed), cv.verdict.feasible ? "true" : "false", cv.verified ? "true" : "false",
              c1 ? fmt(c1->value) : "", c2 ? fmt(c2->value) : "", decreased ? "true" : "false"};
    return it;
  });
  bool const ok = std::all_of(items.begin(), items.end(), [](Item const& it) { return it.ok; });
  merge(rep, items, "runs");
  rep.results["K"] = k1;
  rep.results["fiber_elements"] = fb->size();
  rep.passed = ok;
}

// ---------------------------------------------------------------------------
// E6: changing the generating set of F(2).

void run_e6(ExperimentConfig const& c, ExperimentReport& rep) {
  rep.expectation = "norms bilipschitz with verified C; S'-pseudotrajectories re-verify for S at amplified d";
  GroupSpec const spec = GroupSpec::free_group(2);
  GeneratingSet const s = spec.default_generators();
  GeneratingSet const sp = GeneratingSet::from_words(spec, {"a", "A", "b", "B", "ab", "BA"});
  BilipschitzReport const bl = bilipschitz_constant(spec, s, sp, c.radius_max);
  rep.results["bilipschitz"] = {{"C", fmt(bl.constant)},
                                {"radius", bl.radius},
                                {"witness", bl.witness},
                                {"witness_norm_S", bl.witness_norm},
                                {"witness_norm_S_prime", bl.witness_other_norm},
                                {"checked", bl.checked},
                                {"verified", bl.verified}};

  LinearAction const action = free_saddle_shear_action();
  Rational lip = 0;
  for (auto const& m : generator_matrices(action, sp)) lip = std::max(lip, m.operator_norm());
  // d = d1 (1 + L + ... + L^(C-1)) bounds dist(y_hg, f_h(y_g)) for |h|_S' <= C.
  Integer const steps = (bl.constant.get_num() + bl.constant.get_den() - 1) / bl.constant.get_den();
  Rational amplified = 0;
  Rational term = c.d;
  for (long j = 0; j < steps.get_si(); ++j) {
    amplified += term;
    term *= lip;
  }
  rep.results["lipschitz_S_prime"] = fmt(lip);
  rep.results["amplified_d"] = fmt(amplified);

  auto const b = make_ball(spec, sp, c.radius);
  rep.csv_header = {"seed", "defect_S_prime", "d1", "defect_S", "amplified_d", "ok"};
  auto items = parallel_items(c.seeds, [&](int i) {
    std::uint64_t const seed = c.seed + static_cast<std::uint64_t>(i);
    Pseudotrajectory const traj = perturbed_orbit(action, b, c.x0, c.d, seed);
    DefectReport const dp = max_defect(traj, action);
    DefectReport const ds = max_defect(traj, action, s);
    Item it;
    it.ok = dp.value < c.d && ds.value < amplified;
    it.json = {{"seed", seed}, {"defect_S_prime", fmt(dp.value)}, {"defect_S", fmt(ds.value)}, {"ok", it.ok}};
    it.csv = {std::to_string(seed), fmt(dp.value), fmt(c.d), fmt(ds.value), fmt(amplified), it.ok ? "true" : "false"};
    return it;
  });
  bool const ok = bl.verified && std::all_of(items.begin(), items.end(), [](Item const& it) { return it.ok; });
  merge(rep, items, "runs");
  rep.results["trajectory_ball_size"] = b->size();
  rep.passed = ok;
}

// ---------------------------------------------------------------------------
// E7: P = <[G,G], g> in the Heisenberg group.

bool in_p(HeisenbergTriple const& x, HeisenbergTriple const& g) {
  if (g.a != 0) {
    if (x.a % g.a != 0) return false;
    return x.b == (x.a / g.a) * g.b;
  }
  if (g.b != 0) {
    if (x.b % g.b != 0) return false;
    return x.a == 0;
  }
  return x.a == 0 && x.b == 0;
}

void run_e7(ExperimentConfig const& c, ExperimentReport& rep) {
  rep.expectation = "[p1,p2] has zero a- and b-exponents and h p h^-1 stays in P";
  GroupSpec const spec = GroupSpec::heisenberg();
  auto const b = make_ball(spec, spec.default_generators(), c.radius);
  std::mt19937_64 engine(c.seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(engine() % n); };

  rep.csv_header = {"pair", "g", "p1", "p2", "commutator", "in_R", "conjugate_in_P"};
  std::size_t in_r = 0, trivial = 0, normal = 0;
  for (int i = 0; i < c.pairs; ++i) {
    std::size_t gi = pick(b->size());
    while (b->element(gi).heisenberg().a == 0 && b->element(gi).heisenberg().b == 0) gi = pick(b->size());
    HeisenbergTriple const& g = b->element(gi).heisenberg();
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < b->size(); ++j) {
      if (in_p(b->element(j).heisenberg(), g)) members.push_back(j);
    }
    GroupElement const& p1 = b->element(members[pick(members.size())]);
    GroupElement const& p2 = b->element(members[pick(members.size())]);
    GroupElement const& h = b->element(pick(b->size()));
    GroupElement const comm = commutator(spec, p1, p2);
    GroupElement const conj = multiply(spec, multiply(spec, h, p1), inverse(spec, h));
    bool const r_ok = comm.heisenberg().a == 0 && comm.heisenberg().b == 0;
    bool const n_ok = in_p(conj.heisenberg(), g);
    in_r += r_ok;
    trivial += is_identity(comm);
    normal += n_ok;
    rep.csv_rows.push_back({std::to_string(i), format(spec, b->element(gi)), format(spec, p1), format(spec, p2),
                            format(spec, comm), r_ok ? "true" : "false", n_ok ? "true" : "false"});
  }
  auto const pairs = static_cast<std::size_t>(c.pairs);
  rep.results["pairs"] = pairs;
  rep.results["commutator_in_R"] = in_r;
  rep.results["commutator_trivial"] = trivial;
  rep.results["conjugate_in_P"] = normal;
  rep.results["ball_size"] = b->size();
  rep.notes.push_back("[[G,G],G] is trivial in the Heisenberg group, so membership in R means [p1,p2] = e");
  rep.passed = in_r == pairs && normal == pairs;
}

std::string csv_field(std::string const& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

Rational rational_field(Json const& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(static_cast<long>(v.get<std::int64_t>()));
  throw ParseError("expected a rational (string \"p/q\" or integer)", 0);
}

}  // namespace

std::string to_string(ExperimentId id) { return "E" + std::to_string(static_cast<int>(id) + 1); }

ExperimentId parse_experiment_id(std::string const& text) {
  if (text.size() == 2 && (text[0] == 'E' || text[0] == 'e') && text[1] >= '1' && text[1] <= '7') {
    return static_cast<ExperimentId>(text[1] - '1');
  }
  throw ParseError("unknown experiment '" + text + "' (expected E1..E7)", 0);
}

ExperimentConfig default_config(ExperimentId id) {
  ExperimentConfig c;
  c.id = id;
  switch (id) {
    case ExperimentId::E1:
      break;
    case ExperimentId::E2:
      c.lambda = 3;
      c.d = Rational(1, 100);
      c.epsilon = Rational(1, 50);
      c.radius = 6;
      c.window = 6;
      c.seeds = 50;
      break;
    case ExperimentId::E3:
      c.d = Rational(1, 100);
      c.epsilon = Rational(1, 2);
      c.radius_min = 1;
      c.radius_max = 10;
      break;
    case ExperimentId::E4:
      c.d = Rational(1, 10);
      c.epsilon = Rational(1, 4);
      c.radius_min = 1;
      c.radius_max = 10;
      break;
    case ExperimentId::E5:
      c.d = Rational(1, 100);
      c.epsilon = Rational(1, 100);
      c.window = 3;
      c.fiber_radius = 2;
      c.radius = 8;
      c.seeds = 50;
      break;
    case ExperimentId::E6:
      c.d = Rational(1, 1000);
      c.radius = 3;
      c.radius_max = 8;
      c.seeds = 20;
      break;
    case ExperimentId::E7:
      c.radius = 4;
      c.pairs = 200;
      break;
  }
  return c;
}

ExperimentConfig config_from_json(Json const& j, ExperimentConfig c) {
  if (!j.is_object()) throw ParseError("config must be a JSON object", 0);
  for (auto const& [key, v] : j.items()) {
    if (key == "experiment") {
      c.id = parse_experiment_id(v.get<std::string>());
    } else if (key == "n") {
      c.n = v.get<std::int64_t>();
    } else if (key == "lambda") {
      c.lambda = rational_field(v);
    } else if (key == "d") {
      c.d = rational_field(v);
    } else if (key == "epsilon") {
      c.epsilon = rational_field(v);
    } else if (key == "radius") {
      c.radius = v.get<int>();
    } else if (key == "radius_min") {
      c.radius_min = v.get<int>();
    } else if (key == "radius_max") {
      c.radius_max = v.get<int>();
    } else if (key == "seed") {
      c.seed = v.get<std::uint64_t>();
    } else if (key == "seeds") {
      c.seeds = v.get<int>();
    } else if (key == "mode") {
      std::string const m = v.get<std::string>();
      if (m != "exact" && m != "float") throw ParseError("mode must be \"exact\" or \"float\"", 0);
      c.mode = m == "exact" ? NumericMode::Exact : NumericMode::Float;
    } else if (key == "precision") {
      c.precision = v.get<mpfr_prec_t>();
    } else if (key == "window") {
      c.window = v.get<int>();
    } else if (key == "fiber_radius") {
      c.fiber_radius = v.get<int>();
    } else if (key == "pairs") {
      c.pairs = v.get<int>();
    } else if (key == "x0") {
      c.x0 = point_from_json(v);
    } else if (key == "output_dir") {
      c.output_dir = v.get<std::string>();
    } else {
      throw ParseError("unknown config key '" + key + "'", 0);
    }
  }
  return c;
}

ExperimentConfig config_from_json(Json const& j) {
  if (!j.contains("experiment")) throw ParseError("config needs an \"experiment\" key", 0);
  return config_from_json(j, default_config(parse_experiment_id(j.at("experiment").get<std::string>())));
}

Json config_to_json(ExperimentConfig const& c) {
  return Json{{"experiment", to_string(c.id)},
              {"n", c.n},
              {"lambda", fmt(c.lambda)},
              {"d", fmt(c.d)},
              {"epsilon", fmt(c.epsilon)},
              {"radius", c.radius},
              {"radius_min", c.radius_min},
              {"radius_max", c.radius_max},
              {"seed", c.seed},
              {"seeds", c.seeds},
              {"mode", to_string(c.mode)},
              {"precision", c.precision},
              {"window", c.window},
              {"fiber_radius", c.fiber_radius},
              {"pairs", c.pairs},
              {"x0", point_to_json(c.x0)},
              {"output_dir", c.output_dir}};
}

void validate(ExperimentConfig const& c) {
  auto require = [](bool cond, std::string const& what) {
    if (!cond) throw DomainError(what);
  };
  Rational const n(static_cast<long>(c.n));
  require(c.n >= 2, "n must be >= 2");
  require(c.d > 0, "d must be positive");
  require(c.seeds >= 1, "seeds must be >= 1");
  require(c.x0.dim() == 2, "x0 must be a point of the plane");
  switch (c.id) {
    case ExperimentId::E1:
      require(c.lambda > 1 && c.lambda <= n, "E1 requires lambda in (1, n]");
      require(c.mode == NumericMode::Float || c.lambda == n, "E1 exact mode requires lambda = n");
      require(c.epsilon > 0, "epsilon must be positive");
      require(0 <= c.radius_min && c.radius_min <= c.radius_max, "E1 needs 0 <= radius_min <= radius_max");
      break;
    case ExperimentId::E2:
      require(c.lambda > n, "E2 requires lambda > n");
      require(c.epsilon > 0, "epsilon must be positive");
      require(0 <= c.window && c.window <= c.radius, "E2 needs 0 <= window <= radius");
      break;
    case ExperimentId::E3:
    case ExperimentId::E4:
      require(c.epsilon > 0, "epsilon must be positive");
      require(c.radius_min <= c.radius_max && c.radius_max >= 1, "needs radius_min <= radius_max, radius_max >= 1");
      break;
    case ExperimentId::E5:
      require(c.epsilon > 0, "epsilon must be positive");
      require(c.window >= 1 && c.fiber_radius >= 0, "E5 needs window >= 1 and fiber_radius >= 0");
      require(c.radius >= c.fiber_radius + 2 * c.window, "E5 needs radius >= fiber_radius + 2 * window");
      break;
    case ExperimentId::E6:
      require(c.radius >= 0 && c.radius_max >= 1, "E6 needs radius >= 0 and radius_max >= 1");
      break;
    case ExperimentId::E7:
      require(c.radius >= 1 && c.pairs >= 1, "E7 needs radius >= 1 and pairs >= 1");
      break;
  }
}

ExperimentReport run(ExperimentConfig const& config) {
  validate(config);
  ExperimentReport rep;
  rep.config = config;
  rep.passed = true;
  auto const start = Clock::now();
  switch (config.id) {
    case ExperimentId::E1: run_e1(config, rep); break;
    case ExperimentId::E2: run_e2(config, rep); break;
    case ExperimentId::E3: run_e3(config, rep); break;
    case ExperimentId::E4: run_e4(config, rep); break;
    case ExperimentId::E5: run_e5(config, rep); break;
    case ExperimentId::E6: run_e6(config, rep); break;
    case ExperimentId::E7: run_e7(config, rep); break;
  }
  rep.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return rep;
}

std::string report_json(ExperimentReport const& report, bool include_timings) {
  Json j{{"experiment", to_string(report.config.id)},
         {"config", config_to_json(report.config)},
         {"expectation", report.expectation},
         {"passed", report.passed},
         {"results", report.results},
         {"notes", report.notes},
         {"artifacts", report.artifacts}};
  if (include_timings) j["seconds"] = report.seconds;
  return j.dump(2) + "\n";
}

std::string report_csv(ExperimentReport const& report) {
  std::ostringstream out;
  auto line = [&](std::vector<std::string> const& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
    out << '\n';
  };
  line(report.csv_header);
  for (auto const& row : report.csv_rows) line(row);
  return out.str();
}

std::vector<std::string> emit(ExperimentReport const& report, std::string const& dir, bool include_timings) {
  std::filesystem::create_directories(dir);
  std::string const base = (std::filesystem::path(dir) / to_string(report.config.id)).string();
  std::vector<std::string> paths{base + ".json", base + ".csv"};
  std::vector<std::string> const bodies{report_json(report, include_timings), report_csv(report)};
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::ofstream out(paths[i], std::ios::binary);
    out << bodies[i];
    if (!out) throw Error("failed writing '" + paths[i] + "'");
  }
  return paths;
}

}  // namespace shadowlab
