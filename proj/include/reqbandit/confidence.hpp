#pragma once

// Confidence sets over regressors and the optimistic indices they induce:
// a ridge ellipsoid for linear classes and a squared-loss ball for finite
// classes.

#include "reqbandit/env.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

namespace reqbandit {

// sqrt(beta) = sqrt(lambda) + sqrt(2 log(1/delta) + d log((d lambda + n) / (d lambda)))
double beta_linear(std::size_t nu, double lambda, double delta, std::size_t dim);

// 8 log(N / delta) + 2 alpha n (8 + sqrt(8 log(4 n^2 / delta))); the second
// term is zero at n = 0.
double beta_generic(std::size_t nu, double covering_count, double delta, double alpha);

class RidgeState {
 public:
  RidgeState(std::size_t dim, double lambda, double delta);

  void update(const Eigen::VectorXd& x, double y);

  const Eigen::MatrixXd& gram() const { return gram_; }  // V = lambda I + sum x x^T
  const Eigen::VectorXd& moment() const { return moment_; }  // b = sum x y
  const Eigen::VectorXd& theta_hat() const { return theta_hat_; }
  std::size_t samples() const { return samples_; }
  double lambda() const { return lambda_; }
  double delta() const { return delta_; }
  std::size_t dim() const { return static_cast<std::size_t>(moment_.size()); }

  double beta() const { return beta_linear(samples_, lambda_, delta_, dim()); }
  // x^T V^{-1} x
  double inverse_norm_sq(const Eigen::VectorXd& x) const;
  // sqrt(beta) ||x||_{V^{-1}}
  double bonus(const Eigen::VectorXd& x) const;
  // ||theta - theta_hat||_V^2 <= beta
  bool contains(const Eigen::VectorXd& theta) const;

 private:
  Eigen::MatrixXd gram_;
  Eigen::VectorXd moment_;
  Eigen::VectorXd theta_hat_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  std::size_t samples_ = 0;
  double lambda_;
  double delta_;
};

RidgeState& ridge_update(RidgeState& state, const Eigen::VectorXd& x, double y);
double ucb_linear(const RidgeState& state, const Eigen::VectorXd& x);

using Regressor = std::function<double(const ArmContext&)>;

Regressor linear_regressor(Eigen::VectorXd theta);
// psi(x) = values[x.id]
Regressor tabulated_regressor(std::shared_ptr<const std::vector<double>> values);

// Finite class with cumulative squared losses and pairwise squared distances
// over the observed contexts. covering_count = |F| for every alpha.
class FiniteClassState {
 public:
  FiniteClassState(std::vector<Regressor> members, double delta, double alpha);

  void update(const ArmContext& x, double y);

  std::size_t size() const { return members_.size(); }
  const Regressor& member(std::size_t i) const { return members_[i]; }
  const std::vector<double>& losses() const { return losses_; }
  std::size_t best_index() const { return best_; }
  std::size_t samples() const { return samples_; }
  double delta() const { return delta_; }
  double alpha() const { return alpha_; }
  double covering_count() const { return static_cast<double>(members_.size()); }

  double beta() const { return beta_generic(samples_, covering_count(), delta_, alpha_); }
  // sum_{k < nu} (psi_i(X_k) - psi_hat(X_k))^2, summed to nu - 1.
  double excess_distance(std::size_t i) const;
  bool feasible(std::size_t i) const { return excess_distance(i) <= beta(); }

 private:
  std::vector<Regressor> members_;
  std::vector<double> losses_;
  // Pairwise squared distances over samples 1..nu-1; the newest sample's
  // predictions wait in pending_ until the next update.
  std::vector<double> pair_distance_;
  std::vector<double> pending_;
  std::size_t best_ = 0;
  std::size_t samples_ = 0;
  double delta_;
  double alpha_;
};

double ucb_generic(const FiniteClassState& state, const ArmContext& x);

using ConfidenceBackend = std::variant<RidgeState, FiniteClassState>;

double backend_ucb(const ConfidenceBackend& backend, const ArmContext& x);
void backend_observe(ConfidenceBackend& backend, const ArmContext& x, double y);

}  // namespace reqbandit
