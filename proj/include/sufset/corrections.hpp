#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sufset/logit.hpp"
#include "sufset/sufficient_sets.hpp"

namespace sufset {

// Sampling correction ln pi(D | j) for each member j of a practical set,
// kept only up to an additive constant shared by all members.
namespace correction {

struct None {};

// Chosen plus a uniform random sample of nonchosen alternatives: pi(D | j)
// is the same for every j, so the correction is constant.
struct UniformConditioning {};

// Draws with replacement from known q (indexed by alternative id):
// ln(n_j / q_j).
struct KnownImportance {
  std::vector<double> q;
};

// Plugs the empirical frequency n_j / (R+1) in for q_j; the result
// ln(R+1) does not vary with j.
struct EmpiricalFrequency {};

// Draws with replacement from the true choice probabilities P_n(j | C_n, beta):
// ln n_j - ln P_n(j). Needs the true consideration context and parameters,
// which only evaluation code has. Depends on beta, so the estimator rejects it.
struct ExactReplacement {
  std::optional<ChoiceContext> consideration;
  Parameters params;
};

}  // namespace correction

using CorrectionSpec = std::variant<correction::None, correction::UniformConditioning, correction::KnownImportance,
                                    correction::EmpiricalFrequency, correction::ExactReplacement>;

enum class CorrectionKind { None, UniformConditioning, KnownImportance, EmpiricalFrequency, ExactReplacement };

CorrectionKind kind_of(const CorrectionSpec& spec);
std::string to_string(CorrectionKind kind);
CorrectionKind correction_from_string(const std::string& name);

struct CorrectionTerms {
  std::vector<double> values;  // aligned with SufficientSet::members
  bool beta_dependent = false;

  Eigen::VectorXd as_vector() const;
};

// Throws InvalidInput if a counting correction meets n_j = 0, and
// ConfigError for ExactReplacement without oracle context.
CorrectionTerms correction_terms(const CorrectionSpec& spec, const SufficientSet& set);

// softmax(V_j + c_j) over the members of D.
Eigen::VectorXd corrected_probabilities(const Eigen::VectorXd& utilities, const CorrectionTerms& terms);

// max_j c_j - min_j c_j (0 for an empty set).
double spread(const CorrectionTerms& terms);

bool is_uniform_conditioning(const CorrectionTerms& terms, double tol = 1e-9);

}  // namespace sufset
