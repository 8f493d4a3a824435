#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sufset/corrections.hpp"
#include "sufset/sufficient_sets.hpp"

namespace sufset {

// One modeled choice: attribute rows over D_n, chosen position within D_n,
// fixed correction offsets.
struct Observation {
  Eigen::MatrixXd x;
  int chosen = 0;
  Eigen::VectorXd offsets;

  int size() const noexcept { return static_cast<int>(x.rows()); }
};

class EstimationProblem {
 public:
  explicit EstimationProblem(int K);

  // Throws InvalidInput on shape errors, NumericError on non-finite data.
  void add(Observation obs);

  // Rows of `attributes` (J x K snapshot) for the set members; rejects
  // beta-dependent corrections with ConfigError.
  void add(const SufficientSet& set, const Eigen::MatrixXd& attributes, const CorrectionTerms& terms);

  int dimension() const noexcept { return K_; }
  const std::vector<Observation>& observations() const noexcept { return observations_; }
  int size() const noexcept { return static_cast<int>(observations_.size()); }
  int singleton_count() const;
  double mean_set_size() const;

 private:
  int K_;
  std::vector<Observation> observations_;
};

enum class Order { Value, Gradient, Hessian };

struct Evaluation {
  double loglik = 0.0;
  Eigen::VectorXd gradient;  // empty below Order::Gradient
  Eigen::MatrixXd hessian;   // empty below Order::Hessian
};

// OpenMP kernel: per-observation terms in parallel, then a pairwise tree
// reduction in observation order. Gradient and Hessian use the
// pairwise-difference forms
//   g = sum_{j != c} pi_j (x_c - x_j),
//   H = -sum_{j < k} pi_j pi_k (x_j - x_k)(x_j - x_k)'
// which stay accurate when probabilities saturate.
Evaluation evaluate(const EstimationProblem& problem, const Eigen::VectorXd& beta, Order order);

// Serial reference: textbook formulas, left-to-right accumulation.
Evaluation evaluate_serial(const EstimationProblem& problem, const Eigen::VectorXd& beta, Order order);

}  // namespace sufset
