#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sufset/logit.hpp"

namespace sufset {

struct ScenarioConfig {
  int N = 1000;                   // individuals
  int J = 20;                     // universal set size
  int K = 3;                      // attribute dimension
  int consideration_size = 8;     // J_n, same for everyone
  int R = 10;                     // past instances before the modeled one
  std::vector<double> beta_true{1.0, -0.5, 0.25};
  double attribute_drift_sigma = 0.0;  // sd of per-instance attribute noise
  double behavior_drift_delta = 0.0;   // beta + U(-delta, delta) per instance
  double consideration_churn = 0.0;    // P(instance uses a fresh C_n)
  int cohort_size = 1;                 // individuals sharing one choice situation
  std::uint64_t seed = 1;

  // Throws ConfigError on the first violated constraint.
  void validate() const;

  Eigen::VectorXd beta() const;

  bool operator==(const ScenarioConfig&) const = default;
};

struct Population {
  int J = 0;
  int K = 0;
  int cohort_size = 1;
  std::vector<std::vector<int>> consideration_sets;  // ascending ids, per individual
  std::vector<Eigen::MatrixXd> base_attributes;      // J x K, per individual
  Eigen::VectorXd beta_true;

  int size() const noexcept { return static_cast<int>(consideration_sets.size()); }
  int cohort_of(int individual) const noexcept { return individual / cohort_size; }
};

struct Instance {
  int index = 0;                 // 1..R+1; R+1 is the modeled choice
  Eigen::MatrixXd attributes;    // J x K snapshot over the universal set
  int chosen = -1;
  // Oracle-only fields: empty when read from a public dataset alone.
  std::vector<int> consideration;
  Eigen::VectorXd beta;
};

struct IndividualHistory {
  int id = 0;
  std::vector<Instance> instances;  // R+1 entries ordered by index

  const Instance& modeled() const { return instances.back(); }
  int past_count() const noexcept { return static_cast<int>(instances.size()) - 1; }
};

// What the researcher does not observe: true sets, parameters, drift knobs.
struct OracleInfo {
  Eigen::VectorXd beta_true;
  double attribute_drift_sigma = 0.0;
  double behavior_drift_delta = 0.0;
  double consideration_churn = 0.0;
  std::vector<std::vector<int>> consideration_sets;  // base C_n per individual
};

struct ChoiceHistory {
  int N = 0;
  int J = 0;
  int K = 0;
  int R = 0;
  std::vector<IndividualHistory> individuals;
  std::optional<OracleInfo> oracle;
};

// Consideration sets uniform over size-J_n subsets, attributes iid N(0,1).
// Individuals in the same cohort (blocks of cohort_size consecutive ids)
// share both. Deterministic given config.seed.
Population build_population(const ScenarioConfig& config);

// R+1 instances per individual. Instance r uses
//   attributes = base + N(0, sigma^2) noise, shared within a cohort,
//   beta       = beta* + U(-delta, delta) per coordinate,
//   C_n        = fresh uniform subset with probability churn, else base,
// and a fresh Gumbel draw for the choice. Knobs at zero consume no draws.
ChoiceHistory simulate_history(const Population& pop, const ScenarioConfig& config);

// Context of an instance restricted to its consideration set (needs oracle fields).
ChoiceContext instance_context(const Instance& instance);

// Context of an instance over all J alternatives.
ChoiceContext universal_context(const Instance& instance);

}  // namespace sufset
