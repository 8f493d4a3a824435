#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "sufset/likelihood.hpp"

namespace sufset {

struct EstimateOptions {
  double grad_tol = 1e-6;
  int max_iter = 200;
  double beta_bound = 50.0;
  // A small gradient alone does not stop the search while the Newton step is
  // still large: under separation the gradient vanishes as |beta| grows.
  double step_tol = 1e-4;
};

struct EstimationResult {
  Eigen::VectorXd beta_hat;
  double loglik = 0.0;
  double grad_inf_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  int singleton_observations = 0;
  // Naive inverse negative Hessian; absent when the Hessian is singular.
  std::optional<Eigen::MatrixXd> covariance;

  Eigen::VectorXd standard_errors() const;
};

double pseudo_loglik(const Eigen::VectorXd& beta, const EstimationProblem& problem);
Eigen::VectorXd gradient(const Eigen::VectorXd& beta, const EstimationProblem& problem);
Eigen::MatrixXd hessian(const Eigen::VectorXd& beta, const EstimationProblem& problem);

// Damped Newton ascent with Armijo backtracking. Throws NoIdentification when
// every set is a singleton and SeparationError once |beta_k| > beta_bound.
// Running out of iterations returns converged = false.
EstimationResult estimate(const EstimationProblem& problem, const Eigen::VectorXd& init,
                          const EstimateOptions& opts = {});

// Inverse of -H at beta_hat. Throws RankDeficiency when -H is singular.
Eigen::MatrixXd covariance(const Eigen::VectorXd& beta_hat, const EstimationProblem& problem);

// Plain-text record: beta_hat, loglik, grad_inf_norm, iterations, converged, se.
std::string to_record(const EstimationResult& result);

}  // namespace sufset
