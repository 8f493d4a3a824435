#include "sufset/likelihood.hpp"

#include <cmath>
#include <string>

#include "sufset/errors.hpp"
#include "sufset/logit.hpp"
#include "sufset/parallel.hpp"
#include "sufset/reduction.hpp"

namespace sufset {

EstimationProblem::EstimationProblem(int K) : K_(K) {
  if (K < 1) throw InvalidInput("K must be >= 1");
}

void EstimationProblem::add(Observation obs) {
  if (obs.x.rows() < 1) throw InvalidInput("observation with an empty set");
  if (obs.x.cols() != K_)
    throw InvalidInput("observation has " + std::to_string(obs.x.cols()) + " attributes, expected " +
                       std::to_string(K_));
  if (obs.chosen < 0 || obs.chosen >= obs.x.rows()) throw InvalidInput("chosen position outside the set");
  if (obs.offsets.size() == 0) obs.offsets = Eigen::VectorXd::Zero(obs.x.rows());
  if (obs.offsets.size() != obs.x.rows()) throw InvalidInput("one offset per alternative required");
  if (!obs.x.allFinite()) throw NumericError("non-finite attribute");
  if (!obs.offsets.allFinite()) throw NumericError("non-finite correction offset");
  observations_.push_back(std::move(obs));
}

void EstimationProblem::add(const SufficientSet& set, const Eigen::MatrixXd& attributes, const CorrectionTerms& terms) {
  if (terms.beta_dependent)
    throw ConfigError("beta-dependent corrections cannot be used as fixed offsets in estimation");
  if (terms.values.size() != set.members.size()) throw InvalidInput("terms do not match set");
  const int chosen = set.chosen_position();
  if (chosen < 0) throw InvalidInput("chosen alternative missing from its set");
  Observation obs;
  obs.x.resize(set.size(), attributes.cols());
  for (int i = 0; i < set.size(); ++i) {
    const int id = set.members[static_cast<std::size_t>(i)];
    if (id < 0 || id >= attributes.rows()) throw InvalidInput("set member outside the attribute table");
    obs.x.row(i) = attributes.row(id);
  }
  obs.chosen = chosen;
  obs.offsets = terms.as_vector();
  add(std::move(obs));
}

int EstimationProblem::singleton_count() const {
  int count = 0;
  for (const auto& o : observations_) count += o.size() == 1;
  return count;
}

double EstimationProblem::mean_set_size() const {
  if (observations_.empty()) return 0.0;
  double total = 0.0;
  for (const auto& o : observations_) total += o.size();
  return total / static_cast<double>(observations_.size());
}

namespace {

void check_beta(const EstimationProblem& problem, const Eigen::VectorXd& beta) {
  if (beta.size() != problem.dimension()) throw InvalidInput("beta has the wrong dimension");
  if (!beta.allFinite()) throw NumericError("non-finite beta");
}

}  // namespace

Evaluation evaluate(const EstimationProblem& problem, const Eigen::VectorXd& beta, Order order) {
  check_beta(problem, beta);
  const auto& obs = problem.observations();
  const int N = problem.size();
  const int K = problem.dimension();
  const bool want_grad = order != Order::Value;
  const bool want_hess = order == Order::Hessian;

  std::vector<double> ll(static_cast<std::size_t>(N), 0.0);
  Eigen::MatrixXd grads = want_grad ? Eigen::MatrixXd::Zero(K, N) : Eigen::MatrixXd();
  Eigen::MatrixXd hess = want_hess ? Eigen::MatrixXd::Zero(K * K, N) : Eigen::MatrixXd();

  ExceptionSlot errors;
#pragma omp parallel for schedule(static)
  for (int n = 0; n < N; ++n) {
    errors.capture([&] {
      const Observation& o = obs[static_cast<std::size_t>(n)];
      const int m = o.size();
      if (m == 1) return;  // pi = 1 whatever beta is
      const Eigen::VectorXd v = o.x * beta + o.offsets;
      ll[static_cast<std::size_t>(n)] = log_probability(v, o.chosen);
      if (!want_grad) return;

      const Eigen::VectorXd p = softmax(v);
      Eigen::VectorXd g = Eigen::VectorXd::Zero(K);
      for (int j = 0; j < m; ++j)
        if (j != o.chosen) g += p[j] * (o.x.row(o.chosen) - o.x.row(j)).transpose();
      grads.col(n) = g;

      if (!want_hess) return;
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(K, K);
      for (int j = 0; j < m; ++j) {
        for (int k = j + 1; k < m; ++k) {
          const Eigen::VectorXd d = (o.x.row(j) - o.x.row(k)).transpose();
          h.selfadjointView<Eigen::Lower>().rankUpdate(d, -p[j] * p[k]);
        }
      }
      h.triangularView<Eigen::StrictlyUpper>() = h.transpose();
      hess.col(n) = Eigen::Map<const Eigen::VectorXd>(h.data(), K * K);
    });
  }
  errors.rethrow();

  Evaluation out;
  if (N == 0) {
    if (want_grad) out.gradient = Eigen::VectorXd::Zero(K);
    if (want_hess) out.hessian = Eigen::MatrixXd::Zero(K, K);
    return out;
  }
  const auto n = static_cast<std::size_t>(N);
  out.loglik = pairwise_sum<double>(0, n, [&](std::size_t i) { return ll[i]; });
  if (want_grad)
    out.gradient = pairwise_sum<Eigen::VectorXd>(
        0, n, [&](std::size_t i) -> Eigen::VectorXd { return grads.col(static_cast<Eigen::Index>(i)); });
  if (want_hess) {
    const Eigen::VectorXd flat = pairwise_sum<Eigen::VectorXd>(
        0, n, [&](std::size_t i) -> Eigen::VectorXd { return hess.col(static_cast<Eigen::Index>(i)); });
    out.hessian = Eigen::Map<const Eigen::MatrixXd>(flat.data(), K, K);
  }
  return out;
}

Evaluation evaluate_serial(const EstimationProblem& problem, const Eigen::VectorXd& beta, Order order) {
  check_beta(problem, beta);
  const int K = problem.dimension();
  Evaluation out;
  if (order != Order::Value) out.gradient = Eigen::VectorXd::Zero(K);
  if (order == Order::Hessian) out.hessian = Eigen::MatrixXd::Zero(K, K);

  for (const Observation& o : problem.observations()) {
    const Eigen::VectorXd v = o.x * beta + o.offsets;
    const Eigen::VectorXd p = softmax(v);
    out.loglik += std::log(p[o.chosen]);
    if (order == Order::Value) continue;
    const Eigen::RowVectorXd mean = p.transpose() * o.x;
    out.gradient += (o.x.row(o.chosen) - mean).transpose();
    if (order != Order::Hessian) continue;
    const Eigen::MatrixXd centered = o.x.rowwise() - mean;
    out.hessian -= centered.transpose() * p.asDiagonal() * centered;
  }
  return out;
}

}  // namespace sufset
