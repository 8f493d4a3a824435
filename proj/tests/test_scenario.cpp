#include <doctest.h>

#include <map>

#include "sufset/errors.hpp"
#include "sufset/parallel.hpp"
#include "sufset/scenario.hpp"

using namespace sufset;

namespace {

ScenarioConfig small_config() {
  ScenarioConfig c;
  c.N = 40;
  c.J = 12;
  c.K = 3;
  c.consideration_size = 5;
  c.R = 6;
  c.seed = 99;
  return c;
}

bool same_history(const ChoiceHistory& a, const ChoiceHistory& b) {
  if (a.individuals.size() != b.individuals.size()) return false;
  for (std::size_t n = 0; n < a.individuals.size(); ++n) {
    const auto& x = a.individuals[n].instances;
    const auto& y = b.individuals[n].instances;
    if (x.size() != y.size()) return false;
    for (std::size_t r = 0; r < x.size(); ++r)
      if (x[r].chosen != y[r].chosen || x[r].attributes != y[r].attributes || x[r].consideration != y[r].consideration ||
          x[r].beta != y[r].beta)
        return false;
  }
  return true;
}

}  // namespace

TEST_CASE("config validation") {
  ScenarioConfig c = small_config();
  c.consideration_size = c.J + 1;
  CHECK_THROWS_AS(build_population(c), ConfigError);
  c = small_config();
  c.consideration_churn = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.beta_true = {1.0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.R = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.attribute_drift_sigma = -0.1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("full consideration sets when J_n = J") {
  ScenarioConfig c = small_config();
  c.consideration_size = c.J;
  const Population pop = build_population(c);
  std::vector<int> all(static_cast<std::size_t>(c.J));
  for (int j = 0; j < c.J; ++j) all[static_cast<std::size_t>(j)] = j;
  for (const auto& set : pop.consideration_sets) CHECK(set == all);
}

TEST_CASE("population: sizes and determinism") {
  const ScenarioConfig c = small_config();
  const Population a = build_population(c);
  const Population b = build_population(c);
  REQUIRE(a.size() == c.N);
  for (int n = 0; n < c.N; ++n) {
    const auto& set = a.consideration_sets[static_cast<std::size_t>(n)];
    CHECK(static_cast<int>(set.size()) == c.consideration_size);
    CHECK(std::is_sorted(set.begin(), set.end()));
    CHECK(std::adjacent_find(set.begin(), set.end()) == set.end());
    CHECK(set.front() >= 0);
    CHECK(set.back() < c.J);
    CHECK(set == b.consideration_sets[static_cast<std::size_t>(n)]);
    CHECK(a.base_attributes[static_cast<std::size_t>(n)] == b.base_attributes[static_cast<std::size_t>(n)]);
  }
  ScenarioConfig other = c;
  other.seed = c.seed + 1;
  CHECK(build_population(other).base_attributes[0] != a.base_attributes[0]);
}

TEST_CASE("consideration sets are uniform over subsets") {
  // J = 4, J_n = 2: six subsets, each with probability 1/6.
  ScenarioConfig c = small_config();
  c.N = 60000;
  c.J = 4;
  c.consideration_size = 2;
  const Population pop = build_population(c);
  std::map<std::vector<int>, int> freq;
  for (const auto& s : pop.consideration_sets) ++freq[s];
  CHECK(freq.size() == 6);
  const double se = std::sqrt((1.0 / 6) * (5.0 / 6) / c.N);
  for (auto& [set, count] : freq) CHECK(std::abs(count / double(c.N) - 1.0 / 6) < 4 * se);
}

TEST_CASE("history shape: R = 0 gives only the modeled instance") {
  ScenarioConfig c = small_config();
  c.R = 0;
  const ChoiceHistory h = simulate_history(build_population(c), c);
  for (const auto& ind : h.individuals) {
    REQUIRE(ind.instances.size() == 1);
    CHECK(ind.instances[0].index == 1);
  }
}

TEST_CASE("zero drift: every instance repeats the base context") {
  const ScenarioConfig c = small_config();
  const Population pop = build_population(c);
  const ChoiceHistory h = simulate_history(pop, c);
  for (const auto& ind : h.individuals) {
    REQUIRE(static_cast<int>(ind.instances.size()) == c.R + 1);
    for (const auto& inst : ind.instances) {
      CHECK(inst.attributes == pop.base_attributes[static_cast<std::size_t>(ind.id)]);
      CHECK(inst.consideration == pop.consideration_sets[static_cast<std::size_t>(ind.id)]);
      CHECK(inst.beta == pop.beta_true);
    }
  }
}

TEST_CASE("chosen alternatives belong to the instance's consideration set, with all knobs on") {
  ScenarioConfig c = small_config();
  c.attribute_drift_sigma = 0.5;
  c.behavior_drift_delta = 0.3;
  c.consideration_churn = 0.4;
  const ChoiceHistory h = simulate_history(build_population(c), c);
  int churned = 0;
  for (const auto& ind : h.individuals) {
    for (const auto& inst : ind.instances) {
      CHECK(std::binary_search(inst.consideration.begin(), inst.consideration.end(), inst.chosen));
      CHECK(static_cast<int>(inst.consideration.size()) == c.consideration_size);
      CHECK((inst.beta - h.oracle->beta_true).lpNorm<Eigen::Infinity>() <= c.behavior_drift_delta);
      churned += inst.consideration != h.oracle->consideration_sets[static_cast<std::size_t>(ind.id)];
    }
  }
  CHECK(churned > 0);
}

TEST_CASE("a dominant alternative is chosen almost always") {
  // Attribute 0 is 1 for one considered alternative, 0 elsewhere; beta_0 = 10.
  // P = e^10 / (e^10 + 19) = 0.99914 for |C_n| = 20.
  ScenarioConfig c;
  c.N = 20;
  c.J = 20;
  c.K = 3;
  c.consideration_size = 20;
  c.R = 999;
  c.beta_true = {10.0, 0.0, 0.0};
  c.seed = 4;
  Population pop = build_population(c);
  for (auto& x : pop.base_attributes) {
    x.col(0).setZero();
    x(7, 0) = 1.0;
  }
  const ChoiceHistory h = simulate_history(pop, c);
  const double p = std::exp(10.0) / (std::exp(10.0) + 19.0);
  CHECK(p >= 0.999);
  int hits = 0, total = 0;
  for (const auto& ind : h.individuals)
    for (const auto& inst : ind.instances) {
      hits += inst.chosen == 7;
      ++total;
    }
  CHECK(hits / double(total) >= 0.998);
}

TEST_CASE("zero drift: empirical frequencies approach logit probabilities") {
  ScenarioConfig c;
  c.N = 5;
  c.J = 10;
  c.K = 3;
  c.consideration_size = 5;
  c.R = 10000;
  c.seed = 17;
  const Population pop = build_population(c);
  const ChoiceHistory h = simulate_history(pop, c);
  for (const auto& ind : h.individuals) {
    const ChoiceContext ctx = instance_context(ind.instances[0]);
    const Eigen::VectorXd p = choice_probabilities(ctx, Parameters(pop.beta_true));
    std::map<int, int> counts;
    for (const auto& inst : ind.instances) ++counts[inst.chosen];
    double worst = 0.0;
    for (int i = 0; i < ctx.size(); ++i) {
      const double freq = counts[ctx.alternatives()[static_cast<std::size_t>(i)]] / double(c.R + 1);
      worst = std::max(worst, std::abs(freq - p[i]));
    }
    CHECK(worst < 0.02);
  }
}

TEST_CASE("cohorts share choice situations") {
  ScenarioConfig c = small_config();
  c.cohort_size = 4;
  c.attribute_drift_sigma = 0.7;
  const Population pop = build_population(c);
  const ChoiceHistory h = simulate_history(pop, c);
  for (int n = 0; n < c.N; ++n) {
    const int lead = (n / 4) * 4;
    CHECK(pop.consideration_sets[static_cast<std::size_t>(n)] == pop.consideration_sets[static_cast<std::size_t>(lead)]);
    for (int r = 0; r <= c.R; ++r)
      CHECK(h.individuals[static_cast<std::size_t>(n)].instances[static_cast<std::size_t>(r)].attributes ==
            h.individuals[static_cast<std::size_t>(lead)].instances[static_cast<std::size_t>(r)].attributes);
  }
  CHECK(pop.base_attributes[0] != pop.base_attributes[4]);
}

TEST_CASE("serial and parallel simulation agree exactly") {
  ScenarioConfig c = small_config();
  c.attribute_drift_sigma = 0.3;
  c.behavior_drift_delta = 0.2;
  c.consideration_churn = 0.1;
  set_threads(1);
  const ChoiceHistory serial = simulate_history(build_population(c), c);
  set_threads(4);
  const ChoiceHistory parallel = simulate_history(build_population(c), c);
  set_threads(1);
  CHECK(same_history(serial, parallel));
  CHECK(same_history(serial, simulate_history(build_population(c), c)));
}
