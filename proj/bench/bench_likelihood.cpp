// Wall-clock comparison of the serial reference likelihood kernel and the
// OpenMP kernel on a synthetic problem.
//
//   bench_likelihood [N] [set_size] [K] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "sufset/likelihood.hpp"
#include "sufset/parallel.hpp"

using namespace sufset;

namespace {

EstimationProblem synthetic(int N, int m, int K, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, m - 1);
  EstimationProblem problem(K);
  for (int n = 0; n < N; ++n) {
    Observation o;
    o.x.resize(m, K);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < K; ++k) o.x(j, k) = normal(rng);
    o.chosen = pick(rng);
    o.offsets = Eigen::VectorXd::Zero(m);
    problem.add(std::move(o));
  }
  return problem;
}

template <typename F>
double seconds(int repeats, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / repeats;
}

}  // namespace

int main(int argc, char** argv) {
  const int N = argc > 1 ? std::atoi(argv[1]) : 20000;
  const int m = argc > 2 ? std::atoi(argv[2]) : 8;
  const int K = argc > 3 ? std::atoi(argv[3]) : 3;
  const int repeats = argc > 4 ? std::atoi(argv[4]) : 20;

  const EstimationProblem problem = synthetic(N, m, K, 42);
  const Eigen::VectorXd beta = Eigen::VectorXd::LinSpaced(K, 0.5, -0.5);

  std::printf("N=%d |D|=%d K=%d threads=%d\n", N, m, K, max_threads());
  for (Order order : {Order::Value, Order::Gradient, Order::Hessian}) {
    double serial_ll = 0.0, parallel_ll = 0.0;
    const double ts = seconds(repeats, [&] { serial_ll = evaluate_serial(problem, beta, order).loglik; });
    const double tp = seconds(repeats, [&] { parallel_ll = evaluate(problem, beta, order).loglik; });
    const char* name = order == Order::Value ? "value" : order == Order::Gradient ? "gradient" : "hessian";
    std::printf("%-9s serial %9.3f ms  openmp %9.3f ms  speedup %5.2fx  |dll| %.2e\n", name, 1e3 * ts, 1e3 * tp,
                ts / tp, std::abs(serial_ll - parallel_ll));
  }
  return 0;
}
