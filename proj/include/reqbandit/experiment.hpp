#pragma once

// Seeded replications of a policy on a configured environment, regret
// aggregation against the solved optimal rate, and report files.

#include "reqbandit/coaf.hpp"
#include "reqbandit/config.hpp"
#include "reqbandit/dataset.hpp"
#include "reqbandit/harness.hpp"
#include "reqbandit/rate.hpp"

#include <filesystem>
#include <functional>
#include <optional>

namespace reqbandit {

struct Problem {
  ProblemSpec spec;
  EnvironmentSampler sampler;
  RewardModel model;
  std::optional<FeatureDataset> dataset;
};

// Builds and validates the environment described by the config.
Problem build_problem(const ExperimentConfig& config);
BackendSpec build_backend(const ExperimentConfig& config, const Problem& problem);

// One policy run with seed = config.seed + replication.
Trace run_replication(const ExperimentConfig& config, const Problem& problem, std::size_t replication);

// Runs fn(0..count-1) on `threads` workers; results are stored by index.
void for_each_replication(std::size_t count, std::size_t threads,
                          const std::function<void(std::size_t)>& fn);

struct ExperimentResult {
  GammaStarResult gamma_star;
  RegretCurve curve;
  double wall_seconds = 0.0;
};

// When gamma_star is supplied the solver is skipped.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t threads = 1,
                                std::optional<GammaStarResult> gamma_star = std::nullopt);

// Writes regret.csv (t,mean,q05,q95,n_replications), replications.csv and
// run.json into `dir`. Output bytes depend only on the arguments.
void emit_report(const RegretCurve& curve, const ExperimentConfig& config,
                 const GammaStarResult& gamma_star, const std::filesystem::path& dir);
// Wall time goes to a separate timing.json so that run.json stays byte-stable.
void emit_timing(double wall_seconds, const std::filesystem::path& dir);

// Re-reads replications.csv and rewrites regret.csv.
RegretCurve load_replications(const std::filesystem::path& dir);
void write_regret_csv(const RegretCurve& curve, const std::filesystem::path& path);

}  // namespace reqbandit
