#pragma once

// Bellman residuals h and g, the optimal per-set selection, the optimal
// average reward by projected stochastic approximation, and the closed-form
// mortal-bandit optimum used to cross-check it.

#include "reqbandit/env.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace reqbandit {

// Means sorted non-increasing with their original positions. Ties keep the
// lower original index first.
struct RankedMeans {
  std::vector<double> values;
  std::vector<std::size_t> indices;

  static RankedMeans from(std::span<const double> means);
  std::size_t size() const { return values.size(); }
};

// (S + n) * gamma + C - top_sum. Shared by h, g and phi so that all three
// round identically.
inline double selection_objective(double gamma, double delay, double cost, std::size_t count,
                                  double top_sum) {
  return (delay + static_cast<double>(count)) * gamma + cost - top_sum;
}

struct HValue {
  double value = 0.0;
  std::size_t count = 0;  // smallest minimizing n
};

HValue h_value(double gamma, double delay, double cost, const RankedMeans& mu,
               const ConstraintSet& constraint);

double g_value(double gamma, double delay, double cost, std::span<const double> selected_means);

// Original indices of the top-n arms for the h-minimizing n, in rank order.
std::vector<std::size_t> optimal_selection(double gamma, double delay, double cost,
                                           const RankedMeans& mu, const ConstraintSet& constraint);

// Gamma in [-eta, eta] with the cumulative-delay step accumulator.
class RateEstimate {
 public:
  explicit RateEstimate(double eta, double initial = 0.0);

  double value() const { return gamma_; }
  double accumulated_delay() const { return accumulator_; }
  double eta() const { return eta_; }

  // accumulator += delay; gamma <- proj(gamma - residual / (damping * accumulator)).
  void update(double delay, double residual, double damping = 1.0);

 private:
  double gamma_;
  double accumulator_ = 0.0;
  double eta_;
};

struct GammaStarResult {
  double gamma = 0.0;
  // Mean of h(gamma) over a fresh batch of sets drawn after the iteration.
  double residual = 0.0;
  std::size_t iterations = 0;
};

// Robbins-Monro on E[h(Gamma)] = 0 with step 1 / sum_j S_j, starting at 0.
// The sampler is reseeded with `seed`; psi* is model.mean.
GammaStarResult solve_gamma_star(const ProblemSpec& spec, const EnvironmentSampler& env,
                                 const RewardModel& model, std::size_t iterations,
                                 std::uint64_t seed);

// Lifetime-average reward of the threshold-x policy in a mortal bandit with
// reward samples `rewards` (empirical CDF, right-continuous) and mean lifetime.
double mortal_zeta(double x, std::span<const double> rewards, double mean_lifetime);

// max of mortal_zeta over `resolution` evenly spaced thresholds spanning the
// sample range.
double mortal_gamma_grid(std::span<const double> rewards, double mean_lifetime,
                         std::size_t resolution);

}  // namespace reqbandit
