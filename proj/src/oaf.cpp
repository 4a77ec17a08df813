#include "reqbandit/oaf.hpp"

#include <stdexcept>

namespace reqbandit {

StepOutcome oaf_step(const ProblemSpec& spec, OafState& state, const DecisionSet& set,
                     const RewardModel& model, Rng& reward_rng) {
  StepOutcome out;
  const double start = state.clock;
  const double gamma = state.rate.value();

  std::vector<double> means;
  means.reserve(set.size());
  for (const auto& arm : set.arms) means.push_back(model.mean(arm));
  const RankedMeans ranked = RankedMeans::from(means);
  const HValue h = h_value(gamma, set.delay, set.cost, ranked, spec.constraint());
  out.selected.assign(ranked.indices.begin(),
                      ranked.indices.begin() + static_cast<std::ptrdiff_t>(h.count));

  const double ready = start + set.delay;
  out.events.push_back({ready, EventKind::RequestDone, state.sets_done, set.cost, 0, 0.0, 0.0});
  for (std::size_t k = 0; k < out.selected.size(); ++k) {
    const std::size_t arm = out.selected[k];
    const double reward = model.draw(set.arms[arm], reward_rng);
    out.events.push_back({ready + static_cast<double>(k + 1), EventKind::Selection, state.sets_done,
                          0.0, arm, means[arm], reward});
  }

  state.rate.update(set.delay, h.value);

  out.record.index = state.sets_done;
  out.record.start = start;
  out.record.delay = set.delay;
  out.record.cost = set.cost;
  out.record.offered = set.size();
  out.record.selected = out.selected;
  out.record.rate_before = gamma;
  out.record.rate_after = state.rate.value();

  state.clock = ready + static_cast<double>(h.count);
  ++state.sets_done;
  return out;
}

Trace run_oaf(const ProblemSpec& spec, const EnvironmentSampler& env, const RewardModel& model,
              double horizon, std::uint64_t seed) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  EnvironmentSampler sampler = env.reseeded(derive_seed(seed, kEnvironmentStream));
  Rng reward_rng(derive_seed(seed, kRewardStream));

  Trace trace;
  trace.horizon = horizon;
  OafState state(spec);
  while (state.clock <= horizon) {
    const DecisionSet set = sampler.sample();
    const StepOutcome out = oaf_step(spec, state, set, model, reward_rng);
    trace.append(out.record, out.events);
  }
  trace.clock = state.clock;
  return trace;
}

}  // namespace reqbandit
