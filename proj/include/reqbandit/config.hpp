#pragma once

// Experiment configuration, stored as a JSON tree. Serialization is canonical
// (sorted keys, every field present), so load(dump(c)) dumps to the same text.

#include "reqbandit/env.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace reqbandit {

struct EnvironmentConfig {
  // linear_catalog | dataset | fixed | mortal
  std::string kind = "linear_catalog";
  ArmCountDist arms = UniformCount{6, 20};
  DelayDist delay = UniformReal{5.0, 10.0};
  CostDist cost = ScaledBeta{2.0, 3.0, 0.0, 1.0};

  // linear_catalog: synthetic contexts in the unit ball, psi* = <theta*, x>.
  std::size_t catalog_size = 3000;
  std::size_t dim = 5;
  std::uint64_t catalog_seed = 7;
  std::string noise = "gaussian";  // gaussian | none

  // dataset
  std::string features_csv;
  std::string ratings_csv;  // empty: Gaussian noise around the stored mean

  // fixed: one arm per value with features (value) and psi*(x) = value.
  // mortal: one value drawn per set, shared by every arm of the set.
  std::vector<double> values;
};

struct PolicyConfig {
  std::string name = "oaf";  // oaf | coaf-linear | coaf-finite
  double xi = 0.5;
  double lambda = 1.0;
  std::optional<double> delta;  // default 1/T
  std::optional<double> alpha;  // default 1/T
  std::string class_csv;        // coaf-finite; empty means the singleton {psi*}
};

struct ExperimentConfig {
  EnvironmentConfig environment;
  std::size_t max_arms = 20;
  double tau = 5.0;
  double s = 10.0;
  double c = 1.0;
  ConstraintSet constraint = ConstraintSet::naturals0();
  PolicyConfig policy;
  double horizon = 20000.0;
  std::size_t replications = 200;
  std::uint64_t seed = 1;
  std::size_t gamma_iterations = 1000000;
  std::size_t grid_points = 200;
  std::string output = "out";

  // Reference configuration: L ~ U{6..20}, S ~ U[5, 10], C ~ Beta(2, 3),
  // N = N0, 3000 contexts in d = 5, Gaussian(0, 1) noise.
  static ExperimentConfig reference();
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ExperimentConfig& config);

}  // namespace reqbandit
