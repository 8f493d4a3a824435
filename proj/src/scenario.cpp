#include "sufset/scenario.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "sufset/errors.hpp"

namespace sufset {

namespace {

std::vector<int> uniform_subset(int universe, int size, Rng& rng) {
  std::vector<int> all(static_cast<std::size_t>(universe));
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size));
  std::sample(all.begin(), all.end(), std::back_inserter(out), size, rng);
  return out;  // std::sample keeps the input order, so ascending
}

}  // namespace

void ScenarioConfig::validate() const {
  if (N < 1) throw ConfigError("N must be >= 1");
  if (J < 1) throw ConfigError("J must be >= 1");
  if (K < 1) throw ConfigError("K must be >= 1");
  if (consideration_size < 1 || consideration_size > J)
    throw ConfigError("consideration_size must lie in [1, J]; got " + std::to_string(consideration_size) +
                      " with J = " + std::to_string(J));
  if (R < 0) throw ConfigError("R must be >= 0");
  if (static_cast<int>(beta_true.size()) != K)
    throw ConfigError("beta_true has " + std::to_string(beta_true.size()) + " entries, K = " + std::to_string(K));
  for (double b : beta_true)
    if (!std::isfinite(b)) throw ConfigError("beta_true must be finite");
  if (!(attribute_drift_sigma >= 0.0)) throw ConfigError("attribute_drift_sigma must be >= 0");
  if (!(behavior_drift_delta >= 0.0)) throw ConfigError("behavior_drift_delta must be >= 0");
  if (!(consideration_churn >= 0.0 && consideration_churn <= 1.0))
    throw ConfigError("consideration_churn must lie in [0, 1]");
  if (cohort_size < 1) throw ConfigError("cohort_size must be >= 1");
}

Eigen::VectorXd ScenarioConfig::beta() const {
  return Eigen::Map<const Eigen::VectorXd>(beta_true.data(), static_cast<Eigen::Index>(beta_true.size()));
}

Population build_population(const ScenarioConfig& config) {
  config.validate();
  Population pop;
  pop.J = config.J;
  pop.K = config.K;
  pop.cohort_size = config.cohort_size;
  pop.beta_true = config.beta();
  pop.consideration_sets.resize(static_cast<std::size_t>(config.N));
  pop.base_attributes.resize(static_cast<std::size_t>(config.N));

  const int cohorts = (config.N + config.cohort_size - 1) / config.cohort_size;
#pragma omp parallel for schedule(static)
  for (int c = 0; c < cohorts; ++c) {
    Rng rng = make_rng(config.seed, {stream::population, static_cast<std::uint64_t>(c)});
    std::vector<int> set = uniform_subset(config.J, config.consideration_size, rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd x(config.J, config.K);
    for (int j = 0; j < config.J; ++j)
      for (int k = 0; k < config.K; ++k) x(j, k) = normal(rng);

    const int first = c * config.cohort_size;
    const int last = std::min(config.N, first + config.cohort_size);
    for (int n = first; n < last; ++n) {
      pop.consideration_sets[static_cast<std::size_t>(n)] = set;
      pop.base_attributes[static_cast<std::size_t>(n)] = x;
    }
  }
  return pop;
}

ChoiceContext instance_context(const Instance& instance) {
  if (instance.consideration.empty())
    throw InvalidInput("instance carries no consideration set (oracle unavailable)");
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(instance.consideration.size()), instance.attributes.cols());
  for (std::size_t i = 0; i < instance.consideration.size(); ++i)
    rows.row(static_cast<Eigen::Index>(i)) = instance.attributes.row(instance.consideration[i]);
  return ChoiceContext(instance.consideration, std::move(rows));
}

ChoiceContext universal_context(const Instance& instance) {
  std::vector<int> ids(static_cast<std::size_t>(instance.attributes.rows()));
  std::iota(ids.begin(), ids.end(), 0);
  return ChoiceContext(std::move(ids), instance.attributes);
}

ChoiceHistory simulate_history(const Population& pop, const ScenarioConfig& config) {
  config.validate();
  if (pop.size() != config.N || pop.J != config.J || pop.K != config.K)
    throw InvalidInput("population does not match scenario config");

  const int instances = config.R + 1;
  const int cohorts = (config.N + config.cohort_size - 1) / config.cohort_size;

  // Attribute noise is a property of the choice situation, so one draw per
  // (cohort, instance) serves every cohort member.
  std::vector<std::vector<Eigen::MatrixXd>> noise(static_cast<std::size_t>(cohorts));
  if (config.attribute_drift_sigma > 0.0) {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < cohorts; ++c) {
      auto& per_instance = noise[static_cast<std::size_t>(c)];
      per_instance.resize(static_cast<std::size_t>(instances));
      for (int r = 0; r < instances; ++r) {
        Rng rng = make_rng(config.seed, {stream::cohort_noise, static_cast<std::uint64_t>(c),
                                         static_cast<std::uint64_t>(r)});
        std::normal_distribution<double> normal(0.0, config.attribute_drift_sigma);
        Eigen::MatrixXd e(config.J, config.K);
        for (int j = 0; j < config.J; ++j)
          for (int k = 0; k < config.K; ++k) e(j, k) = normal(rng);
        per_instance[static_cast<std::size_t>(r)] = std::move(e);
      }
    }
  }

  ChoiceHistory history;
  history.N = config.N;
  history.J = config.J;
  history.K = config.K;
  history.R = config.R;
  history.individuals.resize(static_cast<std::size_t>(config.N));

#pragma omp parallel for schedule(static)
  for (int n = 0; n < config.N; ++n) {
    Rng rng = make_rng(config.seed, {stream::history, static_cast<std::uint64_t>(n)});
    std::uniform_real_distribution<double> perturb(-config.behavior_drift_delta, config.behavior_drift_delta);
    const auto& base_set = pop.consideration_sets[static_cast<std::size_t>(n)];
    const auto& base_x = pop.base_attributes[static_cast<std::size_t>(n)];

    IndividualHistory& ind = history.individuals[static_cast<std::size_t>(n)];
    ind.id = n;
    ind.instances.resize(static_cast<std::size_t>(instances));
    for (int r = 0; r < instances; ++r) {
      Instance& inst = ind.instances[static_cast<std::size_t>(r)];
      inst.index = r + 1;
      inst.attributes = base_x;
      if (config.attribute_drift_sigma > 0.0)
        inst.attributes += noise[static_cast<std::size_t>(pop.cohort_of(n))][static_cast<std::size_t>(r)];

      inst.consideration = base_set;
      if (config.consideration_churn > 0.0 && uniform_open01(rng) < config.consideration_churn)
        inst.consideration = uniform_subset(config.J, config.consideration_size, rng);

      inst.beta = pop.beta_true;
      if (config.behavior_drift_delta > 0.0)
        for (Eigen::Index k = 0; k < inst.beta.size(); ++k) inst.beta[k] += perturb(rng);

      const ChoiceContext ctx = instance_context(inst);
      inst.chosen = ctx.alternatives()[static_cast<std::size_t>(gumbel_max_choice(ctx, Parameters(inst.beta), rng))];
    }
  }

  OracleInfo oracle;
  oracle.beta_true = pop.beta_true;
  oracle.attribute_drift_sigma = config.attribute_drift_sigma;
  oracle.behavior_drift_delta = config.behavior_drift_delta;
  oracle.consideration_churn = config.consideration_churn;
  oracle.consideration_sets = pop.consideration_sets;
  history.oracle = std::move(oracle);
  return history;
}

}  // namespace sufset
