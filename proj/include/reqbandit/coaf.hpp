#pragma once

// Contextual online arm filtering: arms are ranked by UCB, selected one at a
// time while a larger admissible count lowers phi, and the unvisited arms are
// re-scored and re-ranked after every observation.

#include "reqbandit/confidence.hpp"
#include "reqbandit/env.hpp"
#include "reqbandit/oaf.hpp"
#include "reqbandit/rate.hpp"
#include "reqbandit/trace.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace reqbandit {

struct LinearBackendSpec {
  double lambda = 1.0;
  double delta = 0.05;
};
struct FiniteBackendSpec {
  std::vector<Regressor> members;
  double delta = 0.05;
  double alpha = 0.0;
};
using BackendSpec = std::variant<LinearBackendSpec, FiniteBackendSpec>;

ConfidenceBackend make_backend(const BackendSpec& spec, std::size_t dim);

struct CoafState {
  RateEstimate rate;
  ConfidenceBackend backend;
  double xi;
  std::size_t sets_done = 0;
  double clock = 0.0;

  // xi in (0, 1]; xi = 1 makes the rate update coincide with OAF's.
  CoafState(const ProblemSpec& spec, ConfidenceBackend backend, double xi, double initial_rate = 0.0);
};

// (S + n) Gamma + C - sum_{i < n} mu_bar[kappa[i]]
double phi_value(std::size_t n, double gamma, std::span<const double> mu_bar,
                 std::span<const std::size_t> kappa, double delay, double cost);

StepOutcome coaf_step(const ProblemSpec& spec, CoafState& state, const DecisionSet& set,
                      const RewardModel& model, Rng& reward_rng);

Trace run_coaf(const ProblemSpec& spec, const EnvironmentSampler& env, const RewardModel& model,
               const BackendSpec& backend, double horizon, double xi, std::uint64_t seed);

}  // namespace reqbandit
