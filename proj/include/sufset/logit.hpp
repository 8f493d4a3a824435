#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sufset/random.hpp"

namespace sufset {

using AttributeVector = Eigen::VectorXd;

// Taste parameters. The scale is carried for completeness but every
// estimation path fixes it to 1.
struct Parameters {
  Eigen::VectorXd beta;
  double mu = 1.0;

  Parameters() = default;
  explicit Parameters(Eigen::VectorXd b, double scale = 1.0);
};

// A choice situation: alternatives (unique ids) and one attribute row each.
class ChoiceContext {
 public:
  ChoiceContext(std::vector<int> alternatives, Eigen::MatrixXd attributes);

  const std::vector<int>& alternatives() const noexcept { return alternatives_; }
  const Eigen::MatrixXd& attributes() const noexcept { return attributes_; }
  int size() const noexcept { return static_cast<int>(alternatives_.size()); }
  int dimension() const noexcept { return static_cast<int>(attributes_.cols()); }

  // Position of alternative `id`, or -1.
  int position(int id) const;

 private:
  std::vector<int> alternatives_;
  Eigen::MatrixXd attributes_;
};

// V = beta' x.
double systematic_utility(const AttributeVector& x, const Parameters& params);

// Utilities of every alternative in the context.
Eigen::VectorXd utilities(const ChoiceContext& ctx, const Parameters& params);

// exp(mu V_i) / sum_j exp(mu V_j) with max subtraction.
Eigen::VectorXd softmax(const Eigen::VectorXd& v, double scale = 1.0);

// log sum_j exp(v_j), overflow safe.
double log_sum_exp(const Eigen::VectorXd& v);

// v_i - log sum_j exp(v_j), accurate when the probability is near 1.
double log_probability(const Eigen::VectorXd& v, Eigen::Index i);

Eigen::VectorXd choice_probabilities(const ChoiceContext& ctx, const Parameters& params);

// Inverse-CDF draw. Throws InvalidInput unless probs is a finite nonnegative
// vector summing to 1 within 1e-9.
int sample_choice(std::span<const double> probs, Rng& rng);

// argmax_i (mu V_i + eps_i) with eps_i iid Gumbel(0, 1) drawn via
// -ln(-ln u), one uniform per alternative in context order.
int gumbel_max_choice(const ChoiceContext& ctx, const Parameters& params, Rng& rng);

}  // namespace sufset
