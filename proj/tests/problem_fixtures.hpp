#pragma once

#include <random>

#include "sufset/likelihood.hpp"

namespace sufset::testing {

// Random observations with |D| in [1, max_set], N(0,1) attributes and
// N(0, offset_sd^2) correction offsets.
inline EstimationProblem random_problem(int N, int max_set, int K, std::uint64_t seed, double offset_sd = 0.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, max_set);
  EstimationProblem problem(K);
  for (int n = 0; n < N; ++n) {
    const int m = size(rng);
    Observation o;
    o.x.resize(m, K);
    o.offsets.resize(m);
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < K; ++k) o.x(j, k) = normal(rng);
      o.offsets[j] = offset_sd * normal(rng);
    }
    o.chosen = std::uniform_int_distribution<int>(0, m - 1)(rng);
    problem.add(std::move(o));
  }
  return problem;
}

// Two alternatives, x = 1 for the first and 0 for the second; `ones` of the
// N observations choose the first.
inline EstimationProblem binary_intercept(int N, int ones) {
  EstimationProblem problem(1);
  for (int n = 0; n < N; ++n) {
    Observation o;
    o.x = Eigen::Vector2d(1.0, 0.0);
    o.chosen = n < ones ? 0 : 1;
    problem.add(std::move(o));
  }
  return problem;
}

}  // namespace sufset::testing
