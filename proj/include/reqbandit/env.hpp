#pragma once

// Problem data model: decision sets, selection-count constraints, bounds,
// the generative environment D and the reward model psi*.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace reqbandit {

using Rng = std::mt19937_64;

// splitmix64 finalizer; maps (base seed, stream id) to an independent seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Stream ids for a policy run: decision sets and rewards use separate
// generators so that matched seeds give identical set sequences across policies.
inline constexpr std::uint64_t kEnvironmentStream = 0;
inline constexpr std::uint64_t kRewardStream = 1;

struct ArmContext {
  std::size_t id = 0;  // catalog / table index, used by tabulated regressors
  Eigen::VectorXd features;
};

struct DecisionSet {
  std::vector<ArmContext> arms;
  double delay = 0.0;
  double cost = 0.0;

  std::size_t size() const { return arms.size(); }
};

// Admissible selection counts N. The symbolic sets N0 = {0,1,...} and
// N = {1,2,...} are represented without enumeration.
class ConstraintSet {
 public:
  enum class Kind { Explicit, Naturals0, Naturals };

  static ConstraintSet naturals0() { return ConstraintSet(Kind::Naturals0, {}); }
  static ConstraintSet naturals() { return ConstraintSet(Kind::Naturals, {}); }
  static ConstraintSet counts(std::vector<std::size_t> admissible);

  Kind kind() const { return kind_; }
  const std::vector<std::size_t>& explicit_counts() const { return counts_; }

  bool contains(std::size_t n) const;
  // Smallest admissible count strictly greater than n.
  std::optional<std::size_t> next_above(std::size_t n) const;
  // Smallest admissible count in {0..arms}.
  std::optional<std::size_t> smallest_within(std::size_t arms) const;
  bool admits_within(std::size_t arms) const { return smallest_within(arms).has_value(); }

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;

 private:
  ConstraintSet(Kind kind, std::vector<std::size_t> counts)
      : kind_(kind), counts_(std::move(counts)) {}

  Kind kind_;
  std::vector<std::size_t> counts_;  // sorted, unique
};

// Bounds of Assumption 2 plus N and the context dimension. eta = max(c/tau, 1).
class ProblemSpec {
 public:
  ProblemSpec(std::size_t max_arms, double tau, double s, double c, ConstraintSet constraint,
              std::size_t dim);

  std::size_t max_arms() const { return max_arms_; }
  double tau() const { return tau_; }
  double s() const { return s_; }
  double c() const { return c_; }
  const ConstraintSet& constraint() const { return constraint_; }
  std::size_t dim() const { return dim_; }
  double eta() const { return eta_; }

 private:
  std::size_t max_arms_;
  double tau_;
  double s_;
  double c_;
  ConstraintSet constraint_;
  std::size_t dim_;
  double eta_;
};

// --- distributions over (L, S, C) ---------------------------------------

struct FixedCount {
  std::size_t value = 0;
};
struct UniformCount {
  std::size_t min = 0;
  std::size_t max = 0;
};
// Geometric on {1, 2, ...} with the given mean, clamped at cap.
struct GeometricCount {
  double mean_lifetime = 1.0;
  std::size_t cap = 1;
};
using ArmCountDist = std::variant<FixedCount, UniformCount, GeometricCount>;

struct FixedReal {
  double value = 0.0;
};
struct UniformReal {
  double min = 0.0;
  double max = 0.0;
};
// min + (max - min) * Beta(a, b)
struct ScaledBeta {
  double a = 1.0;
  double b = 1.0;
  double min = 0.0;
  double max = 1.0;
};
using DelayDist = std::variant<FixedReal, UniformReal>;
using CostDist = std::variant<FixedReal, UniformReal, ScaledBeta>;

// --- context sources -------------------------------------------------------

// L arms drawn uniformly without replacement from a shared catalog.
struct CatalogSource {
  std::shared_ptr<const std::vector<ArmContext>> catalog;
};
// Every set contains exactly these arms; the arm-count distribution is ignored.
struct FixedSource {
  std::vector<ArmContext> arms;
};
// One value v is drawn uniformly per set and every arm carries features (v),
// id = index of v. Models identical rewards within a set (mortal bandits).
struct SharedValueSource {
  std::vector<double> values;
};
using ContextSource = std::variant<CatalogSource, FixedSource, SharedValueSource>;

struct Environment {
  ArmCountDist arm_count;
  DelayDist delay;
  CostDist cost;
  ContextSource contexts;

  std::pair<std::size_t, std::size_t> arm_count_support() const;
  std::pair<double, double> delay_support() const;
  std::pair<double, double> cost_support() const;
  std::size_t context_dim() const;
};

// Seeded IID stream of decision sets from an immutable Environment.
class EnvironmentSampler {
 public:
  EnvironmentSampler(std::shared_ptr<const Environment> env, std::uint64_t seed);

  DecisionSet sample();
  EnvironmentSampler reseeded(std::uint64_t seed) const { return {env_, seed}; }

  const Environment& environment() const { return *env_; }
  std::shared_ptr<const Environment> shared_environment() const { return env_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::shared_ptr<const Environment> env_;
  std::uint64_t seed_;
  Rng rng_;
};

DecisionSet sample_decision_set(EnvironmentSampler& sampler);

// --- reward model ------------------------------------------------------------

struct LinearMean {
  Eigen::VectorXd theta;
};
struct TabulatedMean {
  std::shared_ptr<const std::vector<double>> by_id;
};
struct FirstFeatureMean {};
using MeanFunction = std::variant<LinearMean, TabulatedMean, FirstFeatureMean>;

struct Noiseless {};
struct GaussianNoise {
  double sigma = 1.0;
};
// Reward is one rating drawn uniformly from the arm's stored list; the mean
// function is ignored when drawing.
struct RatingDraw {
  std::shared_ptr<const std::vector<std::vector<double>>> by_id;
};
// Arbitrary zero-mean deviation sampler.
struct CustomNoise {
  std::function<double(Rng&)> deviation;
};
using RewardNoise = std::variant<Noiseless, GaussianNoise, RatingDraw, CustomNoise>;

class RewardModel {
 public:
  RewardModel(MeanFunction mean, RewardNoise noise)
      : mean_(std::move(mean)), noise_(std::move(noise)) {}

  double mean(const ArmContext& x) const;
  double draw(const ArmContext& x, Rng& rng) const;

  const MeanFunction& mean_function() const { return mean_; }
  const RewardNoise& noise() const { return noise_; }

 private:
  MeanFunction mean_;
  RewardNoise noise_;
};

double draw_reward(const RewardModel& model, const ArmContext& x, Rng& rng);

// Throws BoundViolation / EmptyActionSpace unless the environment's declared
// support satisfies the spec's bounds and every supported L admits a count.
void validate_spec(const ProblemSpec& spec, const Environment& env);
// |psi*(x)| <= 1 on every context of a finite support (no-op for infinite ones).
void validate_model(const RewardModel& model, const Environment& env);

// Uniform draw from the unit ball in R^d.
Eigen::VectorXd sample_unit_ball(std::size_t dim, Rng& rng);

}  // namespace reqbandit
