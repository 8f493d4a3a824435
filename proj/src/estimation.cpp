#include "sufset/estimation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "sufset/errors.hpp"

namespace sufset {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-12;

// Ascent direction: solves (-H + shift I) d = g with the smallest shift
// that makes the system positive definite.
Eigen::VectorXd ascent_direction(const Eigen::MatrixXd& H, const Eigen::VectorXd& g) {
  const Eigen::MatrixXd A = -H;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() == Eigen::Success) return llt.solve(g);

  const double scale = std::max(1.0, A.diagonal().cwiseAbs().maxCoeff());
  const auto I = Eigen::MatrixXd::Identity(A.rows(), A.cols());
  for (double shift = 1e-10 * scale; shift < 1e10 * scale; shift *= 10.0) {
    llt.compute(A + shift * I);
    if (llt.info() == Eigen::Success) return llt.solve(g);
  }
  return g;
}

void check_bound(const Eigen::VectorXd& beta, double bound) {
  for (Eigen::Index k = 0; k < beta.size(); ++k)
    if (std::abs(beta[k]) > bound)
      throw SeparationError("coefficient " + std::to_string(k) + " exceeded the divergence bound " +
                            std::to_string(bound) + " (perfect prediction in the data)");
}

}  // namespace

Eigen::VectorXd EstimationResult::standard_errors() const {
  if (!covariance) return Eigen::VectorXd::Constant(beta_hat.size(), std::numeric_limits<double>::quiet_NaN());
  return covariance->diagonal().cwiseMax(0.0).cwiseSqrt();
}

double pseudo_loglik(const Eigen::VectorXd& beta, const EstimationProblem& problem) {
  return evaluate(problem, beta, Order::Value).loglik;
}

Eigen::VectorXd gradient(const Eigen::VectorXd& beta, const EstimationProblem& problem) {
  return evaluate(problem, beta, Order::Gradient).gradient;
}

Eigen::MatrixXd hessian(const Eigen::VectorXd& beta, const EstimationProblem& problem) {
  return evaluate(problem, beta, Order::Hessian).hessian;
}

EstimationResult estimate(const EstimationProblem& problem, const Eigen::VectorXd& init, const EstimateOptions& opts) {
  if (init.size() != problem.dimension()) throw InvalidInput("initial beta has the wrong dimension");
  if (problem.size() == 0 || problem.singleton_count() == problem.size())
    throw NoIdentification("every observation has a singleton set; beta is not identified");
  check_bound(init, opts.beta_bound);

  EstimationResult result;
  result.singleton_observations = problem.singleton_count();
  Eigen::VectorXd beta = init;
  Evaluation ev = evaluate(problem, beta, Order::Hessian);

  for (int iter = 0;; ++iter) {
    result.iterations = iter;
    const double gnorm = ev.gradient.lpNorm<Eigen::Infinity>();
    const Eigen::VectorXd d = ascent_direction(ev.hessian, ev.gradient);
    if (gnorm <= opts.grad_tol && d.lpNorm<Eigen::Infinity>() <= opts.step_tol) {
      result.converged = true;
      break;
    }
    if (iter == opts.max_iter) break;

    const double slope = ev.gradient.dot(d);
    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial;
    double trial_ll = 0.0;
    for (; t >= kMinStep; t *= 0.5) {
      trial = beta + t * d;
      trial_ll = pseudo_loglik(trial, problem);
      if (trial_ll >= ev.loglik + kArmijo * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No representable ascent left: stationary up to rounding.
      result.converged = gnorm <= opts.grad_tol;
      break;
    }
    beta = trial;
    check_bound(beta, opts.beta_bound);
    ev = evaluate(problem, beta, Order::Hessian);
  }

  result.beta_hat = beta;
  result.loglik = ev.loglik;
  result.grad_inf_norm = ev.gradient.lpNorm<Eigen::Infinity>();
  if (result.converged) {
    try {
      result.covariance = covariance(beta, problem);
    } catch (const RankDeficiency&) {
      result.covariance.reset();
    }
  }
  return result;
}

Eigen::MatrixXd covariance(const Eigen::VectorXd& beta_hat, const EstimationProblem& problem) {
  const Eigen::MatrixXd info = -hessian(beta_hat, problem);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (info + info.transpose()));
  if (eig.info() != Eigen::Success) throw RankDeficiency("eigen decomposition of the Hessian failed");
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const double top = std::max(lambda.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if (lambda.minCoeff() <= 1e-10 * top)
    throw RankDeficiency("Hessian is singular (smallest eigenvalue " + std::to_string(lambda.minCoeff()) +
                         "); some coefficient is not identified");
  const Eigen::MatrixXd& V = eig.eigenvectors();
  Eigen::MatrixXd cov = V * lambda.cwiseInverse().asDiagonal() * V.transpose();
  return 0.5 * (cov + cov.transpose());
}

std::string to_record(const EstimationResult& result) {
  auto join = [](const Eigen::VectorXd& v) {
    std::ostringstream os;
    char buf[32];
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.12g", v[k]);
      os << (k ? " " : "") << buf;
    }
    return os.str();
  };
  std::ostringstream os;
  char buf[64];
  os << "beta_hat " << join(result.beta_hat) << '\n';
  std::snprintf(buf, sizeof buf, "%.12g", result.loglik);
  os << "loglik " << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.6g", result.grad_inf_norm);
  os << "grad_inf_norm " << buf << '\n';
  os << "iterations " << result.iterations << '\n';
  os << "converged " << (result.converged ? "true" : "false") << '\n';
  os << "se " << join(result.standard_errors()) << '\n';
  return os.str();
}

}  // namespace sufset
