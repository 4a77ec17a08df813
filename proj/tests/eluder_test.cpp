#include "reqbandit/eluder.hpp"
#include "reqbandit/errors.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace reqbandit;

namespace {

std::vector<ArmContext> basis(std::size_t d) {
  std::vector<ArmContext> out;
  for (std::size_t i = 0; i < d; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    v(static_cast<Eigen::Index>(i)) = 1;
    out.push_back({i, v});
  }
  return out;
}

Regressor linear(std::vector<double> t) {
  return linear_regressor(Eigen::Map<Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size())));
}

// Direct reading of the definitions over tabulated values: tries every
// ordered sequence and every eps' at the critical points where some
// dependence test can flip, plus midpoints between them.
std::size_t oracle(const std::vector<std::vector<double>>& tab, double eps) {
  const std::size_t f = tab.size();
  const std::size_t m = tab[0].size();
  std::vector<double> crit{eps};
  for (std::size_t a = 0; a < f; ++a) {
    for (std::size_t b = 0; b < f; ++b) {
      for (std::size_t k = 0; k < m; ++k) crit.push_back(tab[a][k] - tab[b][k]);
      for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
        double s = 0;
        for (std::size_t k = 0; k < m; ++k) {
          if (mask >> k & 1) s += (tab[a][k] - tab[b][k]) * (tab[a][k] - tab[b][k]);
        }
        crit.push_back(std::sqrt(s));
      }
    }
  }
  std::sort(crit.begin(), crit.end());
  std::vector<double> probes;
  for (std::size_t i = 0; i < crit.size(); ++i) {
    if (crit[i] > eps) probes.push_back(crit[i]);
    if (i + 1 < crit.size() && crit[i + 1] > eps) probes.push_back(0.5 * (std::max(crit[i], eps) + crit[i + 1]));
  }
  probes.push_back(crit.back() + 1);

  std::size_t best = 0;
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  for (double e : probes) {
    if (e <= eps) continue;
    std::vector<std::size_t> perm = order;
    do {
      std::size_t len = 0;
      for (; len < m; ++len) {
        const std::size_t k = perm[len];
        bool independent = false;
        for (std::size_t a = 0; a < f && !independent; ++a) {
          for (std::size_t b = 0; b < f && !independent; ++b) {
            double s = 0;
            for (std::size_t p = 0; p < len; ++p) s += std::pow(tab[a][perm[p]] - tab[b][perm[p]], 2);
            independent = std::sqrt(s) <= e && tab[a][k] - tab[b][k] > e;
          }
        }
        if (!independent) break;
      }
      best = std::max(best, len);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return best;
}

}  // namespace

TEST(Eluder, TwoOrthogonalContexts) {
  const auto omega = basis(2);
  const std::vector<Regressor> f{linear({0, 0}), linear({1, 0}), linear({0, 1})};
  EXPECT_EQ(eluder_dimension_bruteforce(f, omega, 0.5), 2u);
}

TEST(Eluder, TwoMemberClassOnOrthogonalContexts) {
  // a single difference vector cannot be independent twice
  const auto omega = basis(2);
  const std::vector<Regressor> f{linear({0, 0}), linear({1, 1})};
  EXPECT_EQ(eluder_dimension_bruteforce(f, omega, 0.5), 1u);
}

TEST(Eluder, SingletonContext) {
  const auto omega = basis(1);
  const std::vector<Regressor> f{linear({0}), linear({1}), linear({-1}), linear({0.3})};
  EXPECT_LE(eluder_dimension_bruteforce(f, omega, 0.1), 1u);
  EXPECT_EQ(eluder_dimension_bruteforce(f, omega, 0.1), 1u);
}

TEST(Eluder, IdenticalMembersGiveZero) {
  const auto omega = basis(3);
  const std::vector<Regressor> f{linear({0.2, 0.4, -0.1}), linear({0.2, 0.4, -0.1})};
  EXPECT_EQ(eluder_dimension_bruteforce(f, omega, 0.0), 0u);
}

TEST(Eluder, EpsilonAboveEveryGapGivesZero) {
  const auto omega = basis(2);
  const std::vector<Regressor> f{linear({0, 0}), linear({1, 0}), linear({0, 1})};
  EXPECT_EQ(eluder_dimension_bruteforce(f, omega, 1.0), 0u);
}

TEST(Eluder, Envelope) {
  const auto nine = basis(9);
  const std::vector<Regressor> two{linear(std::vector<double>(9, 0.0)), linear(std::vector<double>(9, 1.0))};
  EXPECT_THROW(eluder_dimension_bruteforce(two, nine, 0.1), EnvelopeExceeded);
  const auto omega = basis(2);
  std::vector<Regressor> many(17, linear({0, 0}));
  EXPECT_THROW(eluder_dimension_bruteforce(many, omega, 0.1), EnvelopeExceeded);
}

TEST(Eluder, MatchesSequenceEnumeration) {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng() % 4;
    const std::size_t f = 1 + rng() % 4;
    std::vector<std::vector<double>> tab(f, std::vector<double>(m));
    std::vector<Regressor> members;
    for (auto& row : tab) {
      for (auto& v : row) v = static_cast<double>(rng() % 5) * 0.5 - 1.0;
      members.push_back(
          [row](const ArmContext& x) { return row[x.id]; });
    }
    std::vector<ArmContext> omega;
    for (std::size_t k = 0; k < m; ++k) omega.push_back({k, Eigen::VectorXd::Zero(1)});
    const double eps = static_cast<double>(rng() % 4) * 0.25;
    ASSERT_EQ(eluder_dimension_bruteforce(members, omega, eps), oracle(tab, eps)) << "trial " << trial;
  }
}
