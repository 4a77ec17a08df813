#include "reqbandit/harness.hpp"

#include "reqbandit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace reqbandit {

std::vector<double> uniform_grid(double horizon, std::size_t points) {
  std::vector<double> grid;
  grid.reserve(points);
  for (std::size_t k = 1; k <= points; ++k) {
    grid.push_back(horizon * static_cast<double>(k) / static_cast<double>(points));
  }
  return grid;
}

std::vector<double> regret_on_grid(const Trace& trace, double gamma_star, std::span<const double> grid) {
  std::vector<double> regret;
  regret.reserve(grid.size());
  std::size_t next = 0;
  double collected = 0.0;
  double previous = -std::numeric_limits<double>::infinity();
  for (double t : grid) {
    if (t > trace.horizon) throw GridBeyondHorizon("grid time exceeds the trace horizon");
    if (t < previous) throw std::invalid_argument("grid must be non-decreasing");
    previous = t;
    while (next < trace.events.size() && trace.events[next].time <= t) {
      const TraceEvent& e = trace.events[next++];
      collected += e.kind == EventKind::Selection ? e.mean : -e.cost;
    }
    regret.push_back(t * gamma_star - collected);
  }
  return regret;
}

double nearest_rank(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  const double n = static_cast<double>(sorted.size());
  const auto rank = static_cast<std::size_t>(std::ceil(p * n));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

RegretCurve aggregate_regret(std::vector<double> grid, std::vector<std::vector<double>> replications) {
  RegretCurve curve;
  curve.grid = std::move(grid);
  curve.replications = std::move(replications);
  const std::size_t points = curve.grid.size();
  for (const auto& rep : curve.replications) {
    if (rep.size() != points) throw std::invalid_argument("replication length differs from grid");
  }
  if (curve.replications.empty()) return curve;

  std::vector<double> column(curve.replications.size());
  for (std::size_t k = 0; k < points; ++k) {
    for (std::size_t r = 0; r < column.size(); ++r) column[r] = curve.replications[r][k];
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) sum += v;
    curve.mean.push_back(sum / static_cast<double>(column.size()));
    curve.q05.push_back(nearest_rank(column, 0.05));
    curve.q95.push_back(nearest_rank(column, 0.95));
  }
  return curve;
}

RegretCurve regret_curve(std::span<const Trace> traces, double gamma_star, std::vector<double> grid) {
  std::vector<std::vector<double>> reps;
  reps.reserve(traces.size());
  for (const auto& trace : traces) reps.push_back(regret_on_grid(trace, gamma_star, grid));
  return aggregate_regret(std::move(grid), std::move(reps));
}

double oaf_regret_bound(const ProblemSpec& spec, double horizon) {
  const double l = static_cast<double>(spec.max_arms());
  const double tau = spec.tau();
  const double s = spec.s();
  const double eta = spec.eta();
  const double a = std::max(1.0, s);
  const double g = (s + l) * eta + spec.c() + l;
  const double m = std::max((tau + l) * (tau + l) / tau, (s + l) * (s + l) / s);
  const double u = m * g * g * horizon / (tau * tau) * (1.0 + std::log(horizon / tau));
  return a * eta + l * (1.0 + eta) + std::sqrt(std::max(0.0, u));
}

std::vector<double> oaf_bound_curve(const ProblemSpec& spec, std::span<const double> grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back(oaf_regret_bound(spec, t));
  return out;
}

}  // namespace reqbandit
