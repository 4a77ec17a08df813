#include "reqbandit/coaf.hpp"
#include "reqbandit/experiment.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace reqbandit;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Straight transcription of the selection loop: every unvisited arm is
// rescored from scratch before each choice, and the stopping test scans
// all admissible larger counts.
struct NaiveResult {
  std::vector<std::size_t> selected;
  double gamma_after;
};

NaiveResult naive_step(const ProblemSpec& spec, ConfidenceBackend& backend, RateEstimate& rate, double xi,
                       const DecisionSet& set, const RewardModel& model, Rng& rng) {
  const std::size_t L = set.size();
  const double gamma = rate.value();
  std::vector<double> recorded;
  std::vector<std::size_t> chosen;
  std::vector<bool> visited(L, false);

  auto sorted_unvisited = [&] {
    std::vector<std::pair<double, std::size_t>> u;
    for (std::size_t i = 0; i < L; ++i) {
      if (!visited[i]) u.push_back({backend_ucb(backend, set.arms[i]), i});
    }
    std::sort(u.begin(), u.end(), [](auto a, auto b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
    return u;
  };
  std::vector<std::pair<double, std::size_t>> frozen = sorted_unvisited();
  auto phi = [&](std::size_t n) {
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += i < recorded.size() ? recorded[i] : frozen[i - recorded.size()].first;
    return (set.delay + static_cast<double>(n)) * gamma + set.cost - sum;
  };

  std::size_t n = 0;
  const ConstraintSet& N = spec.constraint();
  while (true) {
    std::optional<std::size_t> next;
    for (std::size_t m = n + 1; m <= L; ++m) {
      if (N.contains(m)) {
        next = m;
        break;
      }
    }
    if (!next) break;
    bool go = !N.contains(n);
    for (std::size_t m = *next; m <= L && !go; ++m) go = N.contains(m) && phi(m) < phi(n);
    if (!go) break;
    for (; n < *next; ++n) {
      const auto [score, arm] = frozen.front();
      visited[arm] = true;
      chosen.push_back(arm);
      recorded.push_back(score);
      backend_observe(backend, set.arms[arm], model.draw(set.arms[arm], rng));
      frozen = sorted_unvisited();
    }
  }
  rate.update(set.delay, phi(n), xi);
  return {chosen, rate.value()};
}

DecisionSet make_set(std::vector<Eigen::VectorXd> xs, double delay, double cost) {
  DecisionSet set;
  for (std::size_t i = 0; i < xs.size(); ++i) set.arms.push_back({i, xs[i]});
  set.delay = delay;
  set.cost = cost;
  return set;
}

}  // namespace

TEST(Phi, SpecExamples) {
  const std::vector<double> mu{0.8, 0.2};
  const std::vector<std::size_t> kappa{0, 1};
  EXPECT_DOUBLE_EQ(phi_value(0, 0.4, mu, kappa, 2.0, 0.3), 2.0 * 0.4 + 0.3);
  EXPECT_DOUBLE_EQ(phi_value(2, 0.0, mu, kappa, 1.0, 0.0), -1.0);
  const std::vector<double> m3{0.1, 0.7, -0.4};
  const std::vector<std::size_t> k3{1, 0, 2};
  for (std::size_t n = 0; n < 3; ++n) {
    EXPECT_NEAR(phi_value(n + 1, 0.25, m3, k3, 1.5, 0.2) - phi_value(n, 0.25, m3, k3, 1.5, 0.2), 0.25 - m3[k3[n]],
                1e-15);
  }
}

TEST(CoafStep, XiRange) {
  const ProblemSpec spec(2, 1.0, 1.0, 1.0, ConstraintSet::naturals0(), 2);
  EXPECT_THROW(CoafState(spec, RidgeState(2, 1, 0.1), 0.0), std::invalid_argument);
  EXPECT_THROW(CoafState(spec, RidgeState(2, 1, 0.1), 1.5), std::invalid_argument);
  EXPECT_NO_THROW(CoafState(spec, RidgeState(2, 1, 0.1), 1.0));
}

TEST(CoafStep, FreshLinearBackendAtUpperRate) {
  // fresh ridge: UCB(x) = ||x|| (1 + sqrt(2 log(1/delta) / lambda)); with
  // gamma = eta = 1, an arm is worth selecting only while its UCB exceeds 1.
  const double delta = 0.05;
  const ProblemSpec spec(2, 1.0, 1.0, 1.0, ConstraintSet::naturals0(), 2);
  CoafState state(spec, RidgeState(2, 1.0, delta), 0.5, 1.0);
  const DecisionSet set = make_set({vec({0.1, 0.0}), vec({0.0, 0.9})}, 1.0, 1.0);
  const double ucb_big = 0.9 * (1 + std::sqrt(2 * std::log(1 / delta)));
  EXPECT_NEAR(backend_ucb(state.backend, set.arms[1]), ucb_big, 1e-12);
  Rng rng(1);
  const RewardModel model(LinearMean{vec({0.3, 0.2})}, Noiseless{});
  const StepOutcome out = coaf_step(spec, state, set, model, rng);
  ASSERT_EQ(out.selected, (std::vector<std::size_t>{1}));
  // the small arm after one orthogonal observation: sqrt(beta_1) * 0.1 < 1
  const double root = 1 + std::sqrt(2 * std::log(1 / delta) + 2 * std::log(3.0 / 2.0));
  EXPECT_LT(root * 0.1, 1.0);
  const double phi1 = (1.0 + 1.0) * 1.0 + 1.0 - ucb_big;
  EXPECT_NEAR(out.record.rate_after, std::clamp(1.0 - phi1 / (0.5 * 1.0), -1.0, 1.0), 1e-12);
  EXPECT_EQ(state.clock, 2.0);
}

TEST(CoafStep, FreshBackendNothingWorthSelecting) {
  // delta = 1: fresh UCB(x) = ||x|| <= 1 = gamma
  const ProblemSpec spec(2, 1.0, 1.0, 1.0, ConstraintSet::naturals0(), 2);
  CoafState state(spec, RidgeState(2, 1.0, 1.0), 0.5, 1.0);
  Rng rng(1);
  const RewardModel model(LinearMean{vec({0.3, 0.2})}, Noiseless{});
  const StepOutcome out = coaf_step(spec, state, make_set({vec({0.6, 0.0}), vec({0.0, 1.0})}, 1.0, 1.0), model, rng);
  EXPECT_TRUE(out.selected.empty());
}

TEST(CoafStep, SingleCountPicksArgmaxUcb) {
  const ProblemSpec spec(4, 1.0, 2.0, 1.0, ConstraintSet::counts({1}), 2);
  CoafState state(spec, RidgeState(2, 1.0, 0.1), 0.5);
  Rng rng(5);
  const RewardModel model(LinearMean{vec({0.6, -0.8})}, GaussianNoise{1.0});
  Rng ctx_rng(6);
  for (int j = 0; j < 200; ++j) {
    std::vector<Eigen::VectorXd> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(sample_unit_ball(2, ctx_rng));
    const DecisionSet set = make_set(xs, 1.5, 0.0);
    std::size_t best = 0;
    for (std::size_t i = 1; i < 4; ++i) {
      if (backend_ucb(state.backend, set.arms[i]) > backend_ucb(state.backend, set.arms[best])) best = i;
    }
    const StepOutcome out = coaf_step(spec, state, set, model, rng);
    ASSERT_EQ(out.selected, (std::vector<std::size_t>{best}));
  }
}

TEST(CoafStep, MatchesNaiveTranscription) {
  const RewardModel model(LinearMean{vec({0.5, 0.5, -0.5})}, GaussianNoise{1.0});
  for (const ConstraintSet& N : {ConstraintSet::naturals0(), ConstraintSet::naturals(), ConstraintSet::counts({0, 2, 5}),
                                 ConstraintSet::counts({1, 3})}) {
    const ProblemSpec spec(6, 1.0, 3.0, 1.0, N, 3);
    CoafState state(spec, RidgeState(3, 1.0, 0.05), 0.5);
    ConfidenceBackend shadow = RidgeState(3, 1.0, 0.05);
    RateEstimate rate(spec.eta());
    Rng rng_a(10), rng_b(10), ctx_rng(11);
    std::uniform_real_distribution<double> delay(1.0, 3.0), cost(-1.0, 1.0);
    for (int j = 0; j < 300; ++j) {
      std::vector<Eigen::VectorXd> xs;
      for (int i = 0; i < 6; ++i) xs.push_back(sample_unit_ball(3, ctx_rng));
      const DecisionSet set = make_set(xs, delay(ctx_rng), cost(ctx_rng));
      const StepOutcome out = coaf_step(spec, state, set, model, rng_a);
      const NaiveResult ref = naive_step(spec, shadow, rate, 0.5, set, model, rng_b);
      ASSERT_EQ(out.selected, ref.selected) << "set " << j;
      ASSERT_EQ(out.record.rate_after, ref.gamma_after) << "set " << j;
      ASSERT_TRUE(N.contains(out.selected.size()));
      ASSERT_LE(std::abs(out.record.rate_after), spec.eta());
    }
  }
}

TEST(CoafStep, SingletonClassReproducesOafStep) {
  const RewardModel model(FirstFeatureMean{}, GaussianNoise{1.0});
  const Regressor truth = [&](const ArmContext& x) { return model.mean(x); };
  for (const ConstraintSet& N : {ConstraintSet::naturals0(), ConstraintSet::counts({1, 3, 4})}) {
    const ProblemSpec spec(5, 1.0, 2.0, 1.0, N, 1);
    CoafState coaf(spec, FiniteClassState({truth}, 0.05, 0.0), 1.0);
    OafState oaf(spec);
    Rng ra(3), rb(3), ctx(4);
    std::uniform_real_distribution<double> u(-1, 1), s(1, 2);
    for (int j = 0; j < 500; ++j) {
      std::vector<Eigen::VectorXd> xs;
      for (int i = 0; i < 5; ++i) xs.push_back(Eigen::VectorXd::Constant(1, u(ctx)));
      const DecisionSet set = make_set(xs, s(ctx), u(ctx));
      const StepOutcome a = coaf_step(spec, coaf, set, model, ra);
      const StepOutcome b = oaf_step(spec, oaf, set, model, rb);
      ASSERT_EQ(a.selected, b.selected);
      ASSERT_EQ(a.record.rate_after, b.record.rate_after);
    }
  }
}

TEST(RunCoaf, HorizonBelowTau) {
  const Problem p = build_problem(ExperimentConfig::reference());
  const Trace t = run_coaf(p.spec, p.sampler, p.model, LinearBackendSpec{}, 4.9, 0.5, 1);
  EXPECT_TRUE(t.events.empty());
  const Trace u = run_coaf(p.spec, p.sampler, p.model, LinearBackendSpec{}, 5.0, 0.5, 1);
  EXPECT_LE(u.events.size(), 1u);
}

TEST(RunCoaf, ReferencePresetInvariantsAndDeterminism) {
  const Problem p = build_problem(ExperimentConfig::reference());
  const Trace a = run_coaf(p.spec, p.sampler, p.model, LinearBackendSpec{1.0, 1e-3}, 4000, 0.5, 7);
  const Trace b = run_coaf(p.spec, p.sampler, p.model, LinearBackendSpec{1.0, 1e-3}, 4000, 0.5, 7);
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t k = 0; k < a.events.size(); ++k) {
    ASSERT_EQ(a.events[k].time, b.events[k].time);
    ASSERT_EQ(a.events[k].reward, b.events[k].reward);
  }
  EnvironmentSampler replay = p.sampler.reseeded(derive_seed(7, kEnvironmentStream));
  double previous = 0;
  for (const auto& rec : a.sets) {
    const DecisionSet set = replay.sample();
    ASSERT_EQ(rec.offered, set.size());
    ASSERT_LE(std::abs(rec.rate_after), p.spec.eta());
    ASSERT_LE(rec.selected.size(), set.size());
    std::vector<std::size_t> sorted = rec.selected;
    std::sort(sorted.begin(), sorted.end());
    ASSERT_EQ(std::unique(sorted.begin(), sorted.end()), sorted.end());
  }
  for (const auto& e : a.events) {
    ASSERT_GE(e.time, previous);
    ASSERT_LE(e.time, 4000.0);
    previous = e.time;
  }
  EXPECT_GT(a.clock, 4000.0);
}

TEST(RunCoaf, SharesDecisionSetsWithOafOnMatchedSeeds) {
  const Problem p = build_problem(ExperimentConfig::reference());
  const Trace c = run_coaf(p.spec, p.sampler, p.model, LinearBackendSpec{}, 3000, 0.5, 3);
  const Trace o = run_oaf(p.spec, p.sampler, p.model, 3000, 3);
  const std::size_t n = std::min(c.sets.size(), o.sets.size());
  for (std::size_t j = 0; j < n; ++j) {
    ASSERT_EQ(c.sets[j].delay, o.sets[j].delay);
    ASSERT_EQ(c.sets[j].cost, o.sets[j].cost);
    ASSERT_EQ(c.sets[j].offered, o.sets[j].offered);
  }
}
