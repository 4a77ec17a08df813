#include "reqbandit/coaf.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace reqbandit {

ConfidenceBackend make_backend(const BackendSpec& spec, std::size_t dim) {
  if (const auto* linear = std::get_if<LinearBackendSpec>(&spec)) {
    return RidgeState(dim, linear->lambda, linear->delta);
  }
  const auto& finite = std::get<FiniteBackendSpec>(spec);
  return FiniteClassState(finite.members, finite.delta, finite.alpha);
}

CoafState::CoafState(const ProblemSpec& spec, ConfidenceBackend backend_in, double xi_in,
                     double initial_rate)
    : rate(spec.eta(), initial_rate), backend(std::move(backend_in)), xi(xi_in) {
  if (!(xi > 0.0 && xi <= 1.0)) throw std::invalid_argument("xi must lie in (0, 1]");
}

double phi_value(std::size_t n, double gamma, std::span<const double> mu_bar,
                 std::span<const std::size_t> kappa, double delay, double cost) {
  double top_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) top_sum += mu_bar[kappa[i]];
  return selection_objective(gamma, delay, cost, n, top_sum);
}

StepOutcome coaf_step(const ProblemSpec& spec, CoafState& state, const DecisionSet& set,
                      const RewardModel& model, Rng& reward_rng) {
  StepOutcome out;
  const ConstraintSet& constraint = spec.constraint();
  const std::size_t arms = set.size();
  const double start = state.clock;
  const double gamma = state.rate.value();
  const double ready = start + set.delay;
  out.events.push_back({ready, EventKind::RequestDone, state.sets_done, set.cost, 0, 0.0, 0.0});

  // mu_bar of a selected arm keeps the value it had when it was chosen.
  std::vector<double> mu_bar(arms);
  for (std::size_t i = 0; i < arms; ++i) mu_bar[i] = backend_ucb(state.backend, set.arms[i]);
  std::vector<std::size_t> kappa(arms);
  std::iota(kappa.begin(), kappa.end(), std::size_t{0});
  auto rank_from = [&](std::size_t first) {
    std::sort(kappa.begin() + static_cast<std::ptrdiff_t>(first), kappa.end(),
              [&](std::size_t a, std::size_t b) {
                return mu_bar[a] > mu_bar[b] || (mu_bar[a] == mu_bar[b] && a < b);
              });
  };
  rank_from(0);

  auto phi = [&](std::size_t n) { return phi_value(n, gamma, mu_bar, kappa, set.delay, set.cost); };

  std::size_t selected = 0;
  while (true) {
    const auto next = constraint.next_above(selected);
    if (!next || *next > arms) break;
    // A count outside N must be left; otherwise continue only on strict improvement.
    bool advance = !constraint.contains(selected);
    if (!advance) {
      const double current = phi(selected);
      for (std::size_t n = *next; n <= arms && !advance; ++n) {
        advance = constraint.contains(n) && phi(n) < current;
      }
    }
    if (!advance) break;

    for (std::size_t rank = selected; rank < *next; ++rank) {
      const std::size_t arm = kappa[rank];
      const double reward = model.draw(set.arms[arm], reward_rng);
      out.selected.push_back(arm);
      out.events.push_back({ready + static_cast<double>(rank + 1), EventKind::Selection,
                            state.sets_done, 0.0, arm, model.mean(set.arms[arm]), reward});
      backend_observe(state.backend, set.arms[arm], reward);
      for (std::size_t k = rank + 1; k < arms; ++k) {
        mu_bar[kappa[k]] = backend_ucb(state.backend, set.arms[kappa[k]]);
      }
      rank_from(rank + 1);
    }
    selected = *next;
  }

  state.rate.update(set.delay, phi(selected), state.xi);

  out.record.index = state.sets_done;
  out.record.start = start;
  out.record.delay = set.delay;
  out.record.cost = set.cost;
  out.record.offered = arms;
  out.record.selected = out.selected;
  out.record.rate_before = gamma;
  out.record.rate_after = state.rate.value();

  state.clock = ready + static_cast<double>(selected);
  ++state.sets_done;
  return out;
}

Trace run_coaf(const ProblemSpec& spec, const EnvironmentSampler& env, const RewardModel& model,
               const BackendSpec& backend, double horizon, double xi, std::uint64_t seed) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  EnvironmentSampler sampler = env.reseeded(derive_seed(seed, kEnvironmentStream));
  Rng reward_rng(derive_seed(seed, kRewardStream));

  Trace trace;
  trace.horizon = horizon;
  CoafState state(spec, make_backend(backend, spec.dim()), xi);
  while (state.clock <= horizon) {
    const DecisionSet set = sampler.sample();
    const StepOutcome out = coaf_step(spec, state, set, model, reward_rng);
    trace.append(out.record, out.events);
  }
  trace.clock = state.clock;
  return trace;
}

}  // namespace reqbandit
