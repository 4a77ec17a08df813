#pragma once

// Regret curves from traces, their quantile bands, and the closed-form OAF
// regret bound used as a reference curve.

#include "reqbandit/env.hpp"
#include "reqbandit/trace.hpp"

#include <span>
#include <vector>

namespace reqbandit {

// points evenly spaced times horizon/points, 2 horizon/points, ..., horizon.
std::vector<double> uniform_grid(double horizon, std::size_t points);

// R(t) = t * gamma_star - Q(t) at each grid time. Throws GridBeyondHorizon if
// a grid time exceeds the trace's horizon.
std::vector<double> regret_on_grid(const Trace& trace, double gamma_star, std::span<const double> grid);

struct RegretCurve {
  std::vector<double> grid;
  std::vector<std::vector<double>> replications;  // [replication][grid index]
  std::vector<double> mean;
  std::vector<double> q05;
  std::vector<double> q95;

  std::size_t replication_count() const { return replications.size(); }
};

// Nearest-rank quantile of an ascending-sorted sample.
double nearest_rank(std::span<const double> sorted, double p);

// Aggregates are computed from sorted values, so they do not depend on the
// order of the replications.
RegretCurve aggregate_regret(std::vector<double> grid, std::vector<std::vector<double>> replications);

RegretCurve regret_curve(std::span<const Trace> traces, double gamma_star, std::vector<double> grid);

// a eta + l (1 + eta) + sqrt(U_T), with a = max(1, s), G = (s + l) eta + c + l and
// U_T = max((tau + l)^2 / tau, (s + l)^2 / s) G^2 T / tau^2 (1 + log(T / tau)).
double oaf_regret_bound(const ProblemSpec& spec, double horizon);
std::vector<double> oaf_bound_curve(const ProblemSpec& spec, std::span<const double> grid);

}  // namespace reqbandit
