#include "sufset/logit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "sufset/errors.hpp"

namespace sufset {

Parameters::Parameters(Eigen::VectorXd b, double scale) : beta(std::move(b)), mu(scale) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidInput("scale mu must be positive");
  if (!beta.allFinite()) throw InvalidInput("beta has non-finite entries");
}

ChoiceContext::ChoiceContext(std::vector<int> alternatives, Eigen::MatrixXd attributes)
    : alternatives_(std::move(alternatives)), attributes_(std::move(attributes)) {
  if (alternatives_.empty()) throw InvalidInput("choice context is empty");
  if (attributes_.rows() != static_cast<Eigen::Index>(alternatives_.size()))
    throw InvalidInput("choice context needs one attribute row per alternative");
  std::unordered_set<int> seen;
  for (int id : alternatives_)
    if (!seen.insert(id).second) throw InvalidInput("duplicate alternative id " + std::to_string(id));
}

int ChoiceContext::position(int id) const {
  auto it = std::find(alternatives_.begin(), alternatives_.end(), id);
  return it == alternatives_.end() ? -1 : static_cast<int>(it - alternatives_.begin());
}

double systematic_utility(const AttributeVector& x, const Parameters& params) {
  if (x.size() != params.beta.size())
    throw InvalidInput("attribute length " + std::to_string(x.size()) + " != parameter length " +
                       std::to_string(params.beta.size()));
  return x.dot(params.beta);
}

Eigen::VectorXd utilities(const ChoiceContext& ctx, const Parameters& params) {
  if (ctx.dimension() != params.beta.size())
    throw InvalidInput("attribute dimension " + std::to_string(ctx.dimension()) +
                       " != parameter length " + std::to_string(params.beta.size()));
  return ctx.attributes() * params.beta;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& v, double scale) {
  if (v.size() == 0) throw InvalidInput("softmax of an empty vector");
  if (!v.allFinite()) throw NumericError("non-finite utility");
  Eigen::VectorXd s = scale * v;
  s.array() = (s.array() - s.maxCoeff()).exp();
  return s / s.sum();
}

double log_sum_exp(const Eigen::VectorXd& v) {
  if (v.size() == 0) throw InvalidInput("log-sum-exp of an empty vector");
  if (!v.allFinite()) throw NumericError("non-finite argument to log-sum-exp");
  Eigen::Index top = 0;
  const double m = v.maxCoeff(&top);
  double rest = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j)
    if (j != top) rest += std::exp(v[j] - m);
  return m + std::log1p(rest);
}

double log_probability(const Eigen::VectorXd& v, Eigen::Index i) {
  if (i < 0 || i >= v.size()) throw InvalidInput("index outside the utility vector");
  if (!v.allFinite()) throw NumericError("non-finite utility");
  Eigen::Index top = 0;
  const double m = v.maxCoeff(&top);
  double rest = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j)
    if (j != top) rest += std::exp(v[j] - m);
  return (v[i] - m) - std::log1p(rest);
}

Eigen::VectorXd choice_probabilities(const ChoiceContext& ctx, const Parameters& params) {
  return softmax(utilities(ctx, params), params.mu);
}

int sample_choice(std::span<const double> probs, Rng& rng) {
  if (probs.empty()) throw InvalidInput("empty probability vector");
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) throw InvalidInput("probabilities must be finite and nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidInput("probabilities must sum to 1");

  const double u = uniform_open01(rng) * total;
  double cumulative = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    cumulative += probs[i];
    if (u < cumulative) return last_positive;
  }
  return last_positive;  // rounding in the cumulative sum
}

int gumbel_max_choice(const ChoiceContext& ctx, const Parameters& params, Rng& rng) {
  const Eigen::VectorXd v = utilities(ctx, params);
  if (!v.allFinite()) throw NumericError("non-finite utility");
  // mu V + Gumbel(0,1) has the same argmax as V + Gumbel(0, 1/mu), which
  // reproduces exp(mu V_i) / sum_j exp(mu V_j).
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < ctx.size(); ++i) {
    const double u = params.mu * v[i] + gumbel(rng);
    if (u > best_value) {
      best_value = u;
      best = i;
    }
  }
  return best;
}

}  // namespace sufset
