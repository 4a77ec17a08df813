#include "reqbandit/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace reqbandit {

double beta_linear(std::size_t nu, double lambda, double delta, std::size_t dim) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
  const double d = static_cast<double>(dim);
  const double n = static_cast<double>(nu);
  const double root =
      std::sqrt(lambda) + std::sqrt(2.0 * std::log(1.0 / delta) + d * std::log((d * lambda + n) / (d * lambda)));
  return root * root;
}

double beta_generic(std::size_t nu, double covering_count, double delta, double alpha) {
  if (!(delta > 0.0 && delta <= 1.0 / std::sqrt(std::exp(1.0)))) {
    throw std::invalid_argument("delta must lie in (0, 1/sqrt(e)]");
  }
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
  if (!(covering_count >= 1.0)) throw std::invalid_argument("covering count must be >= 1");
  const double base = 8.0 * std::log(covering_count / delta);
  if (nu == 0) return base;
  const double n = static_cast<double>(nu);
  return base + 2.0 * alpha * n * (8.0 + std::sqrt(8.0 * std::log(4.0 * n * n / delta)));
}

// --- ridge -------------------------------------------------------------------

RidgeState::RidgeState(std::size_t dim, double lambda, double delta)
    : gram_(lambda * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))),
      moment_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))),
      theta_hat_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))),
      factor_(gram_),
      lambda_(lambda),
      delta_(delta) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
}

void RidgeState::update(const Eigen::VectorXd& x, double y) {
  gram_.noalias() += x * x.transpose();
  gram_ = 0.5 * (gram_ + gram_.transpose()).eval();
  moment_ += y * x;
  factor_.compute(gram_);
  theta_hat_ = factor_.solve(moment_);
  ++samples_;
}

double RidgeState::inverse_norm_sq(const Eigen::VectorXd& x) const {
  return x.dot(factor_.solve(x));
}

double RidgeState::bonus(const Eigen::VectorXd& x) const {
  return std::sqrt(beta()) * std::sqrt(std::max(0.0, inverse_norm_sq(x)));
}

bool RidgeState::contains(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd diff = theta - theta_hat_;
  return diff.dot(gram_ * diff) <= beta();
}

RidgeState& ridge_update(RidgeState& state, const Eigen::VectorXd& x, double y) {
  state.update(x, y);
  return state;
}

double ucb_linear(const RidgeState& state, const Eigen::VectorXd& x) {
  return state.theta_hat().dot(x) + state.bonus(x);
}

// --- finite class --------------------------------------------------------------

Regressor linear_regressor(Eigen::VectorXd theta) {
  return [theta = std::move(theta)](const ArmContext& x) { return theta.dot(x.features); };
}

Regressor tabulated_regressor(std::shared_ptr<const std::vector<double>> values) {
  return [values = std::move(values)](const ArmContext& x) { return values->at(x.id); };
}

FiniteClassState::FiniteClassState(std::vector<Regressor> members, double delta, double alpha)
    : members_(std::move(members)),
      losses_(members_.size(), 0.0),
      pair_distance_(members_.size() * members_.size(), 0.0),
      delta_(delta),
      alpha_(alpha) {
  if (members_.empty()) throw std::invalid_argument("regressor class must be nonempty");
  beta_generic(0, covering_count(), delta_, alpha_);  // parameter check
}

void FiniteClassState::update(const ArmContext& x, double y) {
  const std::size_t count = members_.size();
  if (!pending_.empty()) {
    for (std::size_t a = 0; a < count; ++a) {
      for (std::size_t b = 0; b < count; ++b) {
        const double diff = pending_[a] - pending_[b];
        pair_distance_[a * count + b] += diff * diff;
      }
    }
  }
  pending_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    pending_[i] = members_[i](x);
    const double residual = pending_[i] - y;
    losses_[i] += residual * residual;
  }
  best_ = static_cast<std::size_t>(std::min_element(losses_.begin(), losses_.end()) - losses_.begin());
  ++samples_;
}

double FiniteClassState::excess_distance(std::size_t i) const {
  return pair_distance_[i * members_.size() + best_];
}

double ucb_generic(const FiniteClassState& state, const ArmContext& x) {
  const double threshold = state.beta();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state.excess_distance(i) <= threshold) best = std::max(best, state.member(i)(x));
  }
  return best;
}

double backend_ucb(const ConfidenceBackend& backend, const ArmContext& x) {
  if (const auto* ridge = std::get_if<RidgeState>(&backend)) return ucb_linear(*ridge, x.features);
  return ucb_generic(std::get<FiniteClassState>(backend), x);
}

void backend_observe(ConfidenceBackend& backend, const ArmContext& x, double y) {
  if (auto* ridge = std::get_if<RidgeState>(&backend)) {
    ridge->update(x.features, y);
  } else {
    std::get<FiniteClassState>(backend).update(x, y);
  }
}

}  // namespace reqbandit
