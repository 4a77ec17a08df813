#include "reqbandit/env.hpp"

#include "reqbandit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace reqbandit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double sample_beta(double a, double b, Rng& rng) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

// Floyd's algorithm: k distinct indices from {0..n-1}, in insertion order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  for (std::size_t j = n - k; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    const std::size_t t = pick(rng);
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
      chosen.push_back(t);
    } else {
      chosen.push_back(j);
    }
  }
  return chosen;
}

std::string describe(double v) { return std::to_string(v); }

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// --- ConstraintSet -----------------------------------------------------------

ConstraintSet ConstraintSet::counts(std::vector<std::size_t> admissible) {
  std::sort(admissible.begin(), admissible.end());
  admissible.erase(std::unique(admissible.begin(), admissible.end()), admissible.end());
  return ConstraintSet(Kind::Explicit, std::move(admissible));
}

bool ConstraintSet::contains(std::size_t n) const {
  switch (kind_) {
    case Kind::Naturals0:
      return true;
    case Kind::Naturals:
      return n >= 1;
    case Kind::Explicit:
      return std::binary_search(counts_.begin(), counts_.end(), n);
  }
  return false;
}

std::optional<std::size_t> ConstraintSet::next_above(std::size_t n) const {
  switch (kind_) {
    case Kind::Naturals0:
    case Kind::Naturals:
      return n + 1;
    case Kind::Explicit: {
      auto it = std::upper_bound(counts_.begin(), counts_.end(), n);
      if (it == counts_.end()) return std::nullopt;
      return *it;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> ConstraintSet::smallest_within(std::size_t arms) const {
  std::optional<std::size_t> first;
  switch (kind_) {
    case Kind::Naturals0:
      first = 0;
      break;
    case Kind::Naturals:
      first = 1;
      break;
    case Kind::Explicit:
      if (!counts_.empty()) first = counts_.front();
      break;
  }
  if (first && *first <= arms) return first;
  return std::nullopt;
}

// --- ProblemSpec -------------------------------------------------------------

ProblemSpec::ProblemSpec(std::size_t max_arms, double tau, double s, double c,
                         ConstraintSet constraint, std::size_t dim)
    : max_arms_(max_arms),
      tau_(tau),
      s_(s),
      c_(c),
      constraint_(std::move(constraint)),
      dim_(dim),
      eta_(std::max(c / tau, 1.0)) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw BoundViolation("tau", "must be positive");
  if (!(s >= tau) || !std::isfinite(s)) throw BoundViolation("s", "must satisfy s >= tau");
  if (!(c > 0.0) || !std::isfinite(c)) throw BoundViolation("c", "must be positive");
}

// --- Environment -------------------------------------------------------------

std::pair<std::size_t, std::size_t> Environment::arm_count_support() const {
  if (const auto* fixed = std::get_if<FixedSource>(&contexts)) {
    return {fixed->arms.size(), fixed->arms.size()};
  }
  return std::visit(Overloaded{
                        [](const FixedCount& d) { return std::pair{d.value, d.value}; },
                        [](const UniformCount& d) { return std::pair{d.min, d.max}; },
                        [](const GeometricCount& d) { return std::pair<std::size_t, std::size_t>{1, d.cap}; },
                    },
                    arm_count);
}

std::pair<double, double> Environment::delay_support() const {
  return std::visit(Overloaded{
                        [](const FixedReal& d) { return std::pair{d.value, d.value}; },
                        [](const UniformReal& d) { return std::pair{d.min, d.max}; },
                    },
                    delay);
}

std::pair<double, double> Environment::cost_support() const {
  return std::visit(Overloaded{
                        [](const FixedReal& d) { return std::pair{d.value, d.value}; },
                        [](const UniformReal& d) { return std::pair{d.min, d.max}; },
                        [](const ScaledBeta& d) { return std::pair{d.min, d.max}; },
                    },
                    cost);
}

std::size_t Environment::context_dim() const {
  return std::visit(Overloaded{
                        [](const CatalogSource& src) -> std::size_t {
                          if (!src.catalog || src.catalog->empty()) return 0;
                          return static_cast<std::size_t>(src.catalog->front().features.size());
                        },
                        [](const FixedSource& src) -> std::size_t {
                          if (src.arms.empty()) return 0;
                          return static_cast<std::size_t>(src.arms.front().features.size());
                        },
                        [](const SharedValueSource&) -> std::size_t { return 1; },
                    },
                    contexts);
}

// --- EnvironmentSampler ------------------------------------------------------

EnvironmentSampler::EnvironmentSampler(std::shared_ptr<const Environment> env, std::uint64_t seed)
    : env_(std::move(env)), seed_(seed), rng_(seed) {}

DecisionSet EnvironmentSampler::sample() {
  const Environment& env = *env_;
  DecisionSet set;

  std::size_t count = std::visit(
      Overloaded{
          [](const FixedCount& d) { return d.value; },
          [this](const UniformCount& d) {
            return std::uniform_int_distribution<std::size_t>(d.min, d.max)(rng_);
          },
          [this](const GeometricCount& d) {
            std::geometric_distribution<std::size_t> geo(1.0 / d.mean_lifetime);
            return std::min<std::size_t>(geo(rng_) + 1, d.cap);
          },
      },
      env.arm_count);

  set.delay = std::visit(Overloaded{
                             [](const FixedReal& d) { return d.value; },
                             [this](const UniformReal& d) {
                               return std::uniform_real_distribution<double>(d.min, d.max)(rng_);
                             },
                         },
                         env.delay);

  set.cost = std::visit(Overloaded{
                            [](const FixedReal& d) { return d.value; },
                            [this](const UniformReal& d) {
                              return std::uniform_real_distribution<double>(d.min, d.max)(rng_);
                            },
                            [this](const ScaledBeta& d) {
                              return d.min + (d.max - d.min) * sample_beta(d.a, d.b, rng_);
                            },
                        },
                        env.cost);

  std::visit(Overloaded{
                 [&](const CatalogSource& src) {
                   const auto& catalog = *src.catalog;
                   count = std::min(count, catalog.size());
                   for (std::size_t idx : sample_without_replacement(catalog.size(), count, rng_)) {
                     set.arms.push_back(catalog[idx]);
                   }
                 },
                 [&](const FixedSource& src) { set.arms = src.arms; },
                 [&](const SharedValueSource& src) {
                   std::uniform_int_distribution<std::size_t> pick(0, src.values.size() - 1);
                   const std::size_t idx = pick(rng_);
                   ArmContext arm{idx, Eigen::VectorXd::Constant(1, src.values[idx])};
                   set.arms.assign(count, arm);
                 },
             },
             env.contexts);

  return set;
}

DecisionSet sample_decision_set(EnvironmentSampler& sampler) { return sampler.sample(); }

// --- RewardModel -------------------------------------------------------------

double RewardModel::mean(const ArmContext& x) const {
  return std::visit(Overloaded{
                        [&](const LinearMean& m) { return m.theta.dot(x.features); },
                        [&](const TabulatedMean& m) { return m.by_id->at(x.id); },
                        [&](const FirstFeatureMean&) { return x.features(0); },
                    },
                    mean_);
}

double RewardModel::draw(const ArmContext& x, Rng& rng) const {
  return std::visit(Overloaded{
                        [&](const Noiseless&) { return mean(x); },
                        [&](const GaussianNoise& n) {
                          return mean(x) + std::normal_distribution<double>(0.0, n.sigma)(rng);
                        },
                        [&](const RatingDraw& n) {
                          const auto& ratings = n.by_id->at(x.id);
                          std::uniform_int_distribution<std::size_t> pick(0, ratings.size() - 1);
                          return ratings[pick(rng)];
                        },
                        [&](const CustomNoise& n) { return mean(x) + n.deviation(rng); },
                    },
                    noise_);
}

double draw_reward(const RewardModel& model, const ArmContext& x, Rng& rng) {
  return model.draw(x, rng);
}

// --- validation --------------------------------------------------------------

void validate_spec(const ProblemSpec& spec, const Environment& env) {
  const auto [lmin, lmax] = env.arm_count_support();
  if (lmin > lmax) throw BoundViolation("L", "empty arm-count support");
  if (lmax > spec.max_arms()) {
    throw BoundViolation("l", "arm count " + std::to_string(lmax) + " exceeds l = " +
                                  std::to_string(spec.max_arms()));
  }
  if (const auto* g = std::get_if<GeometricCount>(&env.arm_count)) {
    if (!(g->mean_lifetime >= 1.0)) throw BoundViolation("L", "mean lifetime must be >= 1");
  }
  if (const auto* cat = std::get_if<CatalogSource>(&env.contexts)) {
    if (!cat->catalog || cat->catalog->empty()) throw EmptyCatalog();
    if (lmax > cat->catalog->size()) {
      throw BoundViolation("L", "arm count exceeds catalog size");
    }
  }
  if (const auto* shared = std::get_if<SharedValueSource>(&env.contexts)) {
    if (shared->values.empty()) throw EmptyCatalog();
  }

  const auto [smin, smax] = env.delay_support();
  if (!(smin >= spec.tau()) || !(smin <= smax)) {
    throw BoundViolation("tau", "delay support starts at " + describe(smin));
  }
  if (!(smax <= spec.s())) throw BoundViolation("s", "delay support ends at " + describe(smax));

  const auto [cmin, cmax] = env.cost_support();
  if (!(std::abs(cmin) <= spec.c()) || !(std::abs(cmax) <= spec.c()) || !(cmin <= cmax)) {
    throw BoundViolation("c", "cost support exceeds c = " + describe(spec.c()));
  }
  if (const auto* beta = std::get_if<ScaledBeta>(&env.cost)) {
    if (!(beta->a > 0.0) || !(beta->b > 0.0)) throw BoundViolation("C", "beta parameters must be positive");
  }

  const std::size_t dim = env.context_dim();
  if (dim != spec.dim()) {
    throw BoundViolation("d", "contexts have dimension " + std::to_string(dim) + ", spec declares " +
                                  std::to_string(spec.dim()));
  }
  auto check_contexts = [&](const std::vector<ArmContext>& arms) {
    for (const auto& arm : arms) {
      if (static_cast<std::size_t>(arm.features.size()) != dim) {
        throw BoundViolation("d", "context " + std::to_string(arm.id) + " has wrong dimension");
      }
      if (!arm.features.allFinite()) {
        throw BoundViolation("features", "context " + std::to_string(arm.id) + " is not finite");
      }
    }
  };
  if (const auto* cat = std::get_if<CatalogSource>(&env.contexts)) check_contexts(*cat->catalog);
  if (const auto* fixed = std::get_if<FixedSource>(&env.contexts)) check_contexts(fixed->arms);

  for (std::size_t arms = lmin; arms <= lmax; ++arms) {
    if (!spec.constraint().admits_within(arms)) throw EmptyActionSpace(arms);
  }
}

void validate_model(const RewardModel& model, const Environment& env) {
  const bool linear = std::holds_alternative<LinearMean>(model.mean_function());
  auto check = [&](const ArmContext& arm) {
    if (linear && arm.features.norm() > 1.0 + 1e-12) {
      throw BoundViolation("features", "context " + std::to_string(arm.id) +
                                           " lies outside the unit ball");
    }
    const double mu = model.mean(arm);
    if (!(std::abs(mu) <= 1.0)) {
      throw BoundViolation("mean_reward", "psi*(context " + std::to_string(arm.id) +
                                              ") = " + describe(mu) + " outside [-1, 1]");
    }
  };
  std::visit(Overloaded{
                 [&](const CatalogSource& src) {
                   for (const auto& arm : *src.catalog) check(arm);
                 },
                 [&](const FixedSource& src) {
                   for (const auto& arm : src.arms) check(arm);
                 },
                 [&](const SharedValueSource& src) {
                   for (std::size_t i = 0; i < src.values.size(); ++i) {
                     check(ArmContext{i, Eigen::VectorXd::Constant(1, src.values[i])});
                   }
                 },
             },
             env.contexts);
}

Eigen::VectorXd sample_unit_ball(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  const double radius = std::pow(std::uniform_real_distribution<double>(0.0, 1.0)(rng),
                                 1.0 / static_cast<double>(dim));
  return v * (radius / v.norm());
}

}  // namespace reqbandit
