#pragma once

#include "ofem/experiments.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace ofem::cli
{
/// Experiment description after applying a built-in base, a JSON file and
/// command-line overrides, in that order.
struct RunConfig
{
  std::optional<int> experiment;
  std::string domain = "disk";
  double semi_a = 1.0, semi_b = 1.0;
  CoefficientKind coefficient = CoefficientKind::identity;
  std::string oblique = "rotate";
  double angle = 0.0;
  SolutionKind solution = SolutionKind::sin_exp;
  double epsilon = 1.0;
  std::optional<double> epsilon_tilde;
  int first_level = 1, last_level = 5;
  int n_boundary = 6;
  int volume_degree = 10;
  int edge_points = 10;
  std::string out = "out";
};

/// Defaults of built-in experiment `id`. Throws ConfigError.
RunConfig builtin_config(int id);

/// Applies the keys of a JSON object; unknown keys and bad values throw
/// ConfigError. An "experiment" key resets to that built-in first.
void apply_json(RunConfig &config, const nlohmann::json &j);

/// "A..B" or "A". Throws ConfigError.
std::pair<int, int> parse_levels(const std::string &text);

/// Problem for the config, with the closed-form constant when the data
/// match a built-in experiment.
ProblemSpec make_problem(const RunConfig &config);

nlohmann::json to_json(const RunConfig &config);

} // namespace ofem::cli
