#pragma once

// Reproduction runs E1-E7. Each run checks its own expectation and records
// parameters, verdicts, defects and constants; the JSON and CSV outputs are
// byte-reproducible for a fixed config (timings are opt-in).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shadowlab/io.hpp"
#include "shadowlab/pseudo.hpp"

namespace shadowlab {

enum class ExperimentId { E1, E2, E3, E4, E5, E6, E7 };

std::string to_string(ExperimentId id);
ExperimentId parse_experiment_id(std::string const& text);

struct ExperimentConfig {
  ExperimentId id = ExperimentId::E1;
  std::int64_t n = 2;
  Rational lambda = 2;
  Rational d = Rational(1, 10);
  Rational epsilon = 1;
  int radius = 6;       // single-radius runs (E2, E5 trajectory, E6 trajectory, E7)
  int radius_min = 4;   // sweeps (E1, E3, E4)
  int radius_max = 14;
  std::uint64_t seed = 1;
  int seeds = 1;        // number of consecutive seeds starting at `seed`
  NumericMode mode = NumericMode::Exact;
  mpfr_prec_t precision = Interval::kDefaultPrecision;
  int window = 5;       // fiber window K (E2, E5)
  int fiber_radius = 2; // E5
  int pairs = 200;      // E7
  Point x0 = Point{Rational(1), Rational(1)};
  std::string output_dir;  // artifacts are written only when set
};

// Defaults matching each experiment's acceptance setting.
ExperimentConfig default_config(ExperimentId id);

// Overrides `base` with the keys present in `j`; unknown keys are rejected.
ExperimentConfig config_from_json(Json const& j, ExperimentConfig base);
ExperimentConfig config_from_json(Json const& j);
Json config_to_json(ExperimentConfig const& c);

// Throws DomainError for parameters outside the experiment's domain.
void validate(ExperimentConfig const& c);

struct ExperimentReport {
  ExperimentConfig config;
  std::string expectation;
  bool passed = false;
  Json results = Json::object();
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  std::vector<std::string> artifacts;
  std::vector<std::string> notes;
  double seconds = 0;
};

ExperimentReport run(ExperimentConfig const& config);

std::string report_json(ExperimentReport const& report, bool include_timings = false);
std::string report_csv(ExperimentReport const& report);

// Writes <dir>/<id>.json and <dir>/<id>.csv; returns the paths.
std::vector<std::string> emit(ExperimentReport const& report, std::string const& dir, bool include_timings = false);

}  // namespace shadowlab
