#include "reqbandit/rate.hpp"

#include "reqbandit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace reqbandit {

RankedMeans RankedMeans::from(std::span<const double> means) {
  RankedMeans ranked;
  ranked.indices.resize(means.size());
  std::iota(ranked.indices.begin(), ranked.indices.end(), std::size_t{0});
  std::stable_sort(ranked.indices.begin(), ranked.indices.end(),
                   [&](std::size_t a, std::size_t b) { return means[a] > means[b]; });
  ranked.values.reserve(means.size());
  for (std::size_t idx : ranked.indices) ranked.values.push_back(means[idx]);
  return ranked;
}

HValue h_value(double gamma, double delay, double cost, const RankedMeans& mu,
               const ConstraintSet& constraint) {
  const std::size_t arms = mu.size();
  bool found = false;
  HValue best;
  double top_sum = 0.0;
  for (std::size_t n = 0; n <= arms; ++n) {
    if (n > 0) top_sum += mu.values[n - 1];
    if (!constraint.contains(n)) continue;
    const double value = selection_objective(gamma, delay, cost, n, top_sum);
    if (!found || value < best.value) {
      best = {value, n};
      found = true;
    }
  }
  if (!found) throw EmptyActionSpace(arms);
  return best;
}

double g_value(double gamma, double delay, double cost, std::span<const double> selected_means) {
  double sum = 0.0;
  for (double m : selected_means) sum += m;
  return selection_objective(gamma, delay, cost, selected_means.size(), sum);
}

std::vector<std::size_t> optimal_selection(double gamma, double delay, double cost,
                                           const RankedMeans& mu, const ConstraintSet& constraint) {
  const HValue h = h_value(gamma, delay, cost, mu, constraint);
  return {mu.indices.begin(), mu.indices.begin() + static_cast<std::ptrdiff_t>(h.count)};
}

RateEstimate::RateEstimate(double eta, double initial) : gamma_(initial), eta_(eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("projection radius must be positive");
  if (!(std::abs(initial) <= eta)) throw std::invalid_argument("initial rate outside [-eta, eta]");
}

void RateEstimate::update(double delay, double residual, double damping) {
  accumulator_ += delay;
  gamma_ = std::clamp(gamma_ - residual / (damping * accumulator_), -eta_, eta_);
  if (!(std::abs(gamma_) <= eta_)) {
    throw std::logic_error("rate estimate left the projection interval");
  }
}

GammaStarResult solve_gamma_star(const ProblemSpec& spec, const EnvironmentSampler& env,
                                 const RewardModel& model, std::size_t iterations,
                                 std::uint64_t seed) {
  if (iterations == 0) throw std::invalid_argument("iterations must be >= 1");
  EnvironmentSampler sampler = env.reseeded(seed);
  RateEstimate rate(spec.eta());
  std::vector<double> means;

  auto residual_at = [&](double gamma, const DecisionSet& set) {
    means.clear();
    for (const auto& arm : set.arms) means.push_back(model.mean(arm));
    return h_value(gamma, set.delay, set.cost, RankedMeans::from(means), spec.constraint()).value;
  };

  for (std::size_t j = 0; j < iterations; ++j) {
    const DecisionSet set = sampler.sample();
    rate.update(set.delay, residual_at(rate.value(), set));
  }

  const std::size_t batch = std::min<std::size_t>(iterations, 10000);
  double sum = 0.0;
  for (std::size_t k = 0; k < batch; ++k) sum += residual_at(rate.value(), sampler.sample());
  return {rate.value(), sum / static_cast<double>(batch), iterations};
}

double mortal_zeta(double x, std::span<const double> rewards, double mean_lifetime) {
  if (rewards.empty()) throw std::invalid_argument("mortal_zeta needs reward samples");
  if (!(mean_lifetime >= 1.0)) throw std::invalid_argument("mean lifetime must be >= 1");
  const double n = static_cast<double>(rewards.size());
  double total = 0.0;
  double tail_sum = 0.0;
  std::size_t at_most = 0;
  std::size_t tail_count = 0;
  for (double y : rewards) {
    total += y;
    if (y <= x) ++at_most;
    if (y >= x) {
      tail_sum += y;
      ++tail_count;
    }
  }
  const double mean = total / n;
  const double survive = 1.0 - static_cast<double>(at_most) / n;
  const double tail_mean = tail_count > 0 ? tail_sum / static_cast<double>(tail_count) : 0.0;
  const double weight = survive * (mean_lifetime - 1.0);
  return (mean + weight * tail_mean) / (1.0 + weight);
}

double mortal_gamma_grid(std::span<const double> rewards, double mean_lifetime,
                         std::size_t resolution) {
  if (resolution < 10) throw std::invalid_argument("grid resolution must be >= 10");
  if (rewards.empty()) throw std::invalid_argument("mortal_gamma_grid needs reward samples");
  const auto [lo_it, hi_it] = std::minmax_element(rewards.begin(), rewards.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  double best = mortal_zeta(lo, rewards, mean_lifetime);
  for (std::size_t k = 1; k < resolution; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(resolution - 1);
    best = std::max(best, mortal_zeta(x, rewards, mean_lifetime));
  }
  return best;
}

}  // namespace reqbandit
