#pragma once

#include "jumpdiff/estimators.hpp"
#include "jumpdiff/model.hpp"
#include "jumpdiff/simulator.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace jumpdiff {

struct S2ContourConfig
{
  std::string f = "ja_bump";
  std::vector<double> gammas;
  std::vector<double> alphas;
};

struct Prop1Config
{
  double x = 0.0;
  double u = 1.0;
  std::string f = "drift_erf";
  std::vector<double> h_grid{ 1e-4, 3e-4, 1e-3, 3e-3, 1e-2 };
};

//! A fully resolved run configuration. Every default is materialised so that
//! `to_json` gives a replayable echo.
struct RunConfig
{
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string input;
  nlohmann::json model; // resolved model section
  SimulationPlan simulation;
  EstimatorConfig estimator;
  std::size_t replications = 200;
  std::vector<std::string> outputs;
  S2ContourConfig s2;
  Prop1Config prop1;
};

//! The published schema, compiled into the library.
const nlohmann::json& config_schema();

//! Schema validation, default resolution and semantic checks. Throws
//! ValidationError naming the offending field.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& file);

nlohmann::json to_json(const RunConfig& config);

//! Builds the model from a (resolved or raw) model section.
ModelSpec build_model(const nlohmann::json& section);

//! Fills in model defaults: capped defaults to drift -x and unit diffusion,
//! custom to r = 1, delta = alpha and no tail.
nlohmann::json resolve_model_section(const nlohmann::json& section);

//! Maps experiment output names ("alpha_curve", ...) to curve names ("alpha").
std::vector<std::string> curves_from_outputs(const std::vector<std::string>& outputs);

} // namespace jumpdiff
