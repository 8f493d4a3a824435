#include "sufset/corrections.hpp"

#include <algorithm>
#include <cmath>

#include "sufset/errors.hpp"

namespace sufset {

namespace {

void require_positive_counts(const SufficientSet& set) {
  if (set.counts.size() != set.members.size()) throw InvalidInput("counts and members differ in length");
  for (std::size_t i = 0; i < set.counts.size(); ++i)
    if (set.counts[i] <= 0)
      throw InvalidInput("alternative " + std::to_string(set.members[i]) + " has zero count under a counting protocol");
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

CorrectionKind kind_of(const CorrectionSpec& spec) { return static_cast<CorrectionKind>(spec.index()); }

std::string to_string(CorrectionKind kind) {
  switch (kind) {
    case CorrectionKind::None: return "none";
    case CorrectionKind::UniformConditioning: return "uniform_conditioning";
    case CorrectionKind::KnownImportance: return "known_importance";
    case CorrectionKind::EmpiricalFrequency: return "empirical_frequency";
    case CorrectionKind::ExactReplacement: return "exact_replacement";
  }
  return "unknown";
}

CorrectionKind correction_from_string(const std::string& name) {
  for (auto k : {CorrectionKind::None, CorrectionKind::UniformConditioning, CorrectionKind::KnownImportance,
                 CorrectionKind::EmpiricalFrequency, CorrectionKind::ExactReplacement})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown correction '" + name + "'");
}

Eigen::VectorXd CorrectionTerms::as_vector() const {
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

CorrectionTerms correction_terms(const CorrectionSpec& spec, const SufficientSet& set) {
  const std::size_t m = set.members.size();
  CorrectionTerms terms;
  terms.values.assign(m, 0.0);

  std::visit(
      overloaded{
          [](const correction::None&) {},
          [](const correction::UniformConditioning&) {},
          [&](const correction::EmpiricalFrequency&) { require_positive_counts(set); },
          [&](const correction::KnownImportance& c) {
            require_positive_counts(set);
            for (std::size_t i = 0; i < m; ++i) {
              const int id = set.members[i];
              if (id < 0 || static_cast<std::size_t>(id) >= c.q.size())
                throw InvalidInput("q has no entry for alternative " + std::to_string(id));
              const double q = c.q[static_cast<std::size_t>(id)];
              if (!(q > 0.0) || !std::isfinite(q))
                throw InvalidInput("q must be positive for sampled alternative " + std::to_string(id));
              terms.values[i] = std::log(set.counts[i] / q);
            }
          },
          [&](const correction::ExactReplacement& c) {
            if (!c.consideration) throw ConfigError("exact_replacement correction requires oracle access");
            require_positive_counts(set);
            const Eigen::VectorXd v = utilities(*c.consideration, c.params) * c.params.mu;
            const double lse = log_sum_exp(v);
            for (std::size_t i = 0; i < m; ++i) {
              const int pos = c.consideration->position(set.members[i]);
              if (pos < 0)
                throw InvalidInput("alternative " + std::to_string(set.members[i]) +
                                   " is outside the true consideration set");
              terms.values[i] = std::log(static_cast<double>(set.counts[i])) - (v[pos] - lse);
            }
            terms.beta_dependent = true;
          },
      },
      spec);
  return terms;
}

Eigen::VectorXd corrected_probabilities(const Eigen::VectorXd& utilities, const CorrectionTerms& terms) {
  if (static_cast<std::size_t>(utilities.size()) != terms.values.size())
    throw InvalidInput("utilities and correction terms differ in length");
  const Eigen::VectorXd shifted = utilities + terms.as_vector();
  if (!shifted.allFinite()) throw NumericError("non-finite corrected utility");
  return softmax(shifted);
}

double spread(const CorrectionTerms& terms) {
  if (terms.values.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(terms.values.begin(), terms.values.end());
  return *hi - *lo;
}

bool is_uniform_conditioning(const CorrectionTerms& terms, double tol) { return spread(terms) <= tol; }

}  // namespace sufset
