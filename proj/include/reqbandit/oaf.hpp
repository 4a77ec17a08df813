#pragma once

// Online arm filtering with known psi*: rank arms by true mean, select the
// h-minimizing top-n, then take a projected stochastic-approximation step.

#include "reqbandit/env.hpp"
#include "reqbandit/rate.hpp"
#include "reqbandit/trace.hpp"

#include <cstdint>
#include <vector>

namespace reqbandit {

struct OafState {
  RateEstimate rate;
  std::size_t sets_done = 0;
  double clock = 0.0;

  explicit OafState(const ProblemSpec& spec, double initial_rate = 0.0)
      : rate(spec.eta(), initial_rate) {}
};

struct StepOutcome {
  std::vector<std::size_t> selected;
  std::vector<TraceEvent> events;
  SetRecord record;
};

// Rewards of the selected arms are drawn from `reward_rng` and logged but do
// not influence the policy.
StepOutcome oaf_step(const ProblemSpec& spec, OafState& state, const DecisionSet& set,
                     const RewardModel& model, Rng& reward_rng);

Trace run_oaf(const ProblemSpec& spec, const EnvironmentSampler& env, const RewardModel& model,
              double horizon, std::uint64_t seed);

}  // namespace reqbandit
