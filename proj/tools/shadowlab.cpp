// shadowlab: run the reproduction experiments and check saved trajectories.
//
//   shadowlab run    --experiment E1 [--config cfg.json] [--out dir] [--timings]
//   shadowlab sweep  --experiment E1 --radius 4..14 [--config cfg.json] [--out dir]
//   shadowlab verify --trajectory file.tsv --epsilon 1/10
//
// Exit status: 0 expectation met, 1 expectation failed, 2 usage or input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "shadowlab/error.hpp"
#include "shadowlab/experiments.hpp"
#include "shadowlab/io.hpp"
#include "shadowlab/shadow.hpp"

namespace sl = shadowlab;

namespace {

sl::ExperimentConfig load_config(std::string const& experiment, std::string const& path) {
  sl::ExperimentId const id = sl::parse_experiment_id(experiment);
  sl::ExperimentConfig config = sl::default_config(id);
  if (path.empty()) return config;
  std::ifstream in(path);
  if (!in) throw sl::Error("cannot open config '" + path + "'");
  sl::Json j;
  try {
    j = sl::Json::parse(in);
  } catch (nlohmann::json::exception const& e) {
    throw sl::ParseError(std::string("config: ") + e.what(), 0);
  }
  config = sl::config_from_json(j, config);
  if (config.id != id) throw sl::DomainError("config names " + sl::to_string(config.id) + " but --experiment is " + experiment);
  return config;
}

// "a..b" or a single radius.
std::pair<int, int> parse_range(std::string const& text) {
  auto const dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      int const r = std::stoi(text);
      return {r, r};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (std::logic_error const&) {
    throw sl::ParseError("radius range must look like 4..14", 0);
  }
}

int finish(sl::ExperimentReport const& report, std::string const& out_dir, bool timings) {
  if (out_dir.empty()) {
    std::cout << sl::report_json(report, timings);
  } else {
    for (auto const& p : sl::emit(report, out_dir, timings)) std::cerr << "wrote " << p << '\n';
  }
  std::cerr << sl::to_string(report.config.id) << ": " << (report.passed ? "expectation met" : "EXPECTATION FAILED")
            << '\n';
  return report.passed ? 0 : 1;
}

int verify(std::string const& path, std::string const& epsilon_text) {
  sl::Rational const eps = sl::parse_rational(epsilon_text);
  sl::LoadedTrajectory const loaded = sl::load_trajectory(path);
  sl::DefectReport const def = sl::max_defect(loaded.trajectory, loaded.action);
  sl::Json out{{"trajectory", path},
               {"group", loaded.action.spec().descriptor()},
               {"ball_size", loaded.trajectory.size()},
               {"mode", sl::to_string(loaded.trajectory.mode())},
               {"declared_d", sl::format(loaded.trajectory.declared_d())},
               {"max_defect", sl::format(def.value)},
               {"epsilon", sl::format(eps)}};
  bool ok = true;
  if (loaded.trajectory.mode() == sl::NumericMode::Exact) {
    sl::ShadowingProblem const problem(loaded.action, loaded.trajectory, eps);
    auto const constraints = sl::shadow_constraints(problem);
    sl::FeasibilityVerdict const v = sl::feasible_region(constraints, problem.dim());
    ok = v.feasible ? sl::verify_witness(constraints, *v.witness)
                    : sl::verify_certificate(v.certificate, problem.dim()) &&
                          sl::verify_multipliers(v.certificate, v.multipliers);
    out["verdict"] = sl::verdict_to_json(v);
    out["verdict_verified"] = ok;
  } else {
    out["verdict"] = nullptr;
    out["note"] = "feasibility is decided in exact mode only";
  }
  std::cout << out.dump(2) << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact shadowing experiments for group actions on the plane"};
  app.require_subcommand(1);

  std::string experiment, config_path, out_dir, radius_text, trajectory_path, epsilon_text;
  bool timings = false;

  auto* run = app.add_subcommand("run", "Run one experiment and check its expectation");
  run->add_option("--experiment", experiment, "E1..E7")->required();
  run->add_option("--config", config_path, "JSON config overriding the defaults");
  run->add_option("--out", out_dir, "Write <id>.json and <id>.csv here instead of printing");
  run->add_flag("--timings", timings, "Include wall-clock seconds in the report");

  auto* sweep = app.add_subcommand("sweep", "Radius sweep for E1, E3 or E4");
  sweep->add_option("--experiment", experiment, "E1, E3 or E4")->required();
  sweep->add_option("--radius", radius_text, "Radius range a..b")->required();
  sweep->add_option("--config", config_path, "JSON config overriding the defaults");
  sweep->add_option("--out", out_dir, "Write <id>.json and <id>.csv here instead of printing");
  sweep->add_flag("--timings", timings, "Include wall-clock seconds in the report");

  auto* check = app.add_subcommand("verify", "Measure a saved trajectory and decide eps-shadowing");
  check->add_option("--trajectory", trajectory_path, "Trajectory file")->required()->check(CLI::ExistingFile);
  check->add_option("--epsilon", epsilon_text, "Shadowing tolerance p/q")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return verify(trajectory_path, epsilon_text);
    sl::ExperimentConfig config = load_config(experiment, config_path);
    if (*sweep) {
      if (config.id != sl::ExperimentId::E1 && config.id != sl::ExperimentId::E3 &&
          config.id != sl::ExperimentId::E4) {
        throw sl::DomainError("sweep supports E1, E3 and E4");
      }
      std::tie(config.radius_min, config.radius_max) = parse_range(radius_text);
    }
    if (!out_dir.empty() && config.output_dir.empty()) config.output_dir = out_dir;
    return finish(sl::run(config), out_dir, timings);
  } catch (sl::Error const& e) {
    std::cerr << "shadowlab: " << e.what() << '\n';
    return 2;
  } catch (std::exception const& e) {
    std::cerr << "shadowlab: " << e.what() << '\n';
    return 2;
  }
}
