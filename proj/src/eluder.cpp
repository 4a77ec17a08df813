#include "reqbandit/eluder.hpp"

#include "reqbandit/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

namespace reqbandit {

std::size_t eluder_dimension_bruteforce(std::span<const Regressor> members,
                                        std::span<const ArmContext> contexts, double epsilon) {
  const std::size_t m = contexts.size();
  const std::size_t f = members.size();
  if (m > 8 || f > 16) {
    throw EnvelopeExceeded("eluder brute force supports at most 8 contexts and 16 regressors");
  }
  if (m == 0 || f == 0) return 0;

  std::vector<double> table(f * m);  // table[a * m + k] = psi_a(x_k)
  for (std::size_t a = 0; a < f; ++a) {
    for (std::size_t k = 0; k < m; ++k) table[a * m + k] = members[a](contexts[k]);
  }

  // Prefix distances depend only on the set of predecessors.
  const std::size_t subsets = std::size_t{1} << m;
  const std::size_t pairs = f * f;
  std::vector<double> squared(subsets * pairs, 0.0);
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    const std::size_t k = static_cast<std::size_t>(std::countr_zero(mask));
    const std::size_t rest = mask & (mask - 1);
    for (std::size_t a = 0; a < f; ++a) {
      for (std::size_t b = 0; b < f; ++b) {
        const double diff = table[a * m + k] - table[b * m + k];
        squared[mask * pairs + a * f + b] = squared[rest * pairs + a * f + b] + diff * diff;
      }
    }
  }
  std::vector<double> distance(squared.size());
  std::transform(squared.begin(), squared.end(), distance.begin(), [](double v) { return std::sqrt(v); });

  double widest = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < f; ++a) {
    for (std::size_t b = 0; b < f; ++b) {
      for (std::size_t k = 0; k < m; ++k) widest = std::max(widest, table[a * m + k] - table[b * m + k]);
    }
  }

  // The feasible eps' form a finite union of intervals [distance, difference);
  // their infima are the distances themselves or points just above epsilon.
  std::vector<double> candidates{std::nextafter(epsilon, std::numeric_limits<double>::infinity())};
  for (double d : distance) {
    if (d > epsilon && d < widest) candidates.push_back(d);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto independent = [&](std::size_t mask, std::size_t k, double eps) {
    for (std::size_t a = 0; a < f; ++a) {
      for (std::size_t b = 0; b < f; ++b) {
        if (distance[mask * pairs + a * f + b] <= eps && table[a * m + k] - table[b * m + k] > eps) {
          return true;
        }
      }
    }
    return false;
  };

  std::size_t best = 0;
  std::vector<char> reachable(subsets);
  for (double eps : candidates) {
    if (!(eps < widest)) break;
    std::fill(reachable.begin(), reachable.end(), 0);
    reachable[0] = 1;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      if (!reachable[mask]) continue;
      best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(mask)));
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t bit = std::size_t{1} << k;
        if ((mask & bit) == 0 && !reachable[mask | bit] && independent(mask, k, eps)) {
          reachable[mask | bit] = 1;
        }
      }
    }
    if (best == m) break;
  }
  return best;
}

}  // namespace reqbandit
