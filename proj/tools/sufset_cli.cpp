// Command-line entry point: generate data, build sets, estimate, and run
// Monte Carlo experiments.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sufset/config.hpp"
#include "sufset/dataset_io.hpp"
#include "sufset/errors.hpp"
#include "sufset/experiment.hpp"
#include "sufset/parallel.hpp"

namespace fs = std::filesystem;
using namespace sufset;

namespace {

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  int threads = 0;
};

ConfigDocument load(const GlobalOptions& g) {
  ConfigDocument doc = g.config.empty() ? ConfigDocument{} : load_config(g.config);
  if (g.seed) {
    doc.experiment.scenario.seed = *g.seed;
    for (auto& c : doc.comparisons) c.scenario.seed = *g.seed;
  }
  return doc;
}

fs::path out_file(const GlobalOptions& g, const std::string& name) {
  fs::create_directories(g.out);
  return fs::path(g.out) / name;
}

int cmd_generate(const GlobalOptions& g) {
  const ExperimentConfig cfg = load(g).experiment;
  cfg.scenario.validate();
  const Population pop = build_population(cfg.scenario);
  const ChoiceHistory history = simulate_history(pop, cfg.scenario);
  const fs::path data = out_file(g, "dataset.jsonl");
  const fs::path oracle = out_file(g, "oracle.jsonl");
  write_dataset(history, data);
  write_oracle(history, oracle);
  std::cout << "wrote " << data.string() << " and " << oracle.string() << '\n';
  return 0;
}

ChoiceHistory load_history(const GlobalOptions& g, const std::string& data, bool with_oracle) {
  const fs::path path = data.empty() ? fs::path(g.out) / "dataset.jsonl" : fs::path(data);
  std::optional<fs::path> oracle;
  if (with_oracle) oracle = path.parent_path() / "oracle.jsonl";
  return read_dataset(path, oracle);
}

ExperimentConfig config_for_history(const GlobalOptions& g, const ChoiceHistory& history) {
  ExperimentConfig cfg = load(g).experiment;
  cfg.scenario.N = history.N;
  cfg.scenario.J = history.J;
  cfg.scenario.K = history.K;
  cfg.scenario.R = history.R;
  cfg.scenario.consideration_size = std::min(cfg.scenario.consideration_size, history.J);
  if (static_cast<int>(cfg.scenario.beta_true.size()) != history.K) cfg.scenario.beta_true.assign(history.K, 0.0);
  cfg.validate();
  return cfg;
}

int cmd_build_sets(const GlobalOptions& g, const std::string& data) {
  const ChoiceHistory history = load_history(g, data, false);
  const ExperimentConfig cfg = config_for_history(g, history);
  const PreparedSample sample = prepare_sample(history, cfg, cfg.scenario.seed);
  const fs::path path = out_file(g, "sets.jsonl");
  write_sets(path, sample.sets);
  std::cout << "wrote " << sample.sets.size() << " " << to_string(cfg.protocol.kind) << " sets to " << path.string()
            << " (mean size " << sample.problem.mean_set_size() << ")\n";
  return 0;
}

int cmd_estimate(const GlobalOptions& g, const std::string& data, bool use_oracle) {
  const ChoiceHistory history = load_history(g, data, use_oracle);
  const ExperimentConfig cfg = config_for_history(g, history);
  const PreparedSample sample = prepare_sample(history, cfg, cfg.scenario.seed);
  const EstimationResult result = estimate(sample.problem, Eigen::VectorXd::Zero(history.K), cfg.estimate);

  std::string record = to_record(result);
  record += "singleton_sets " + std::to_string(result.singleton_observations) + '\n';
  if (history.oracle) {
    const Eigen::VectorXd bias = result.beta_hat - history.oracle->beta_true;
    record += "bias";
    for (Eigen::Index k = 0; k < bias.size(); ++k) record += ' ' + std::to_string(bias[k]);
    record += '\n';
  } else {
    record += "bias oracle unavailable\n";
  }
  const fs::path path = out_file(g, "estimate.txt");
  write_text(path, record);
  std::cout << record;
  return 0;
}

int cmd_experiment(const GlobalOptions& g) {
  ExperimentConfig cfg = load(g).experiment;
  const std::string name = cfg.output_path.empty() ? "metrics.csv" : fs::path(cfg.output_path).filename().string();
  cfg.output_path = out_file(g, name).string();
  const auto rows = run_experiment(cfg);
  std::cout << metrics_csv(rows);
  return 0;
}

int cmd_compare(const GlobalOptions& g) {
  ConfigDocument doc = load(g);
  if (doc.comparisons.empty()) doc.comparisons.push_back(doc.experiment);
  const auto rows = compare_protocols(doc.comparisons);
  const std::string csv = comparison_csv(rows);
  write_text(out_file(g, "compare.csv"), csv);
  std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sufficient-set discrete choice laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config, "Experiment config (JSON)");
  app.add_option("--seed", g.seed, "Override scenario seed");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "OpenMP threads (0 = runtime default)");

  std::string data;
  bool no_oracle = false;
  auto* generate = app.add_subcommand("generate", "Simulate a population and write dataset + oracle sidecar");
  auto* build_sets = app.add_subcommand("build-sets", "Build sufficient sets for a dataset");
  build_sets->add_option("--data", data, "Dataset file (default <out>/dataset.jsonl)");
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate beta on a dataset");
  estimate_cmd->add_option("--data", data, "Dataset file (default <out>/dataset.jsonl)");
  estimate_cmd->add_flag("--no-oracle", no_oracle, "Ignore oracle.jsonl next to the dataset");
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo experiment, writes metrics CSV");
  auto* compare = app.add_subcommand("compare", "Compare (protocol, correction) pairs on one scenario");

  CLI11_PARSE(app, argc, argv);
  if (g.threads > 0) set_threads(g.threads);

  try {
    if (*generate) return cmd_generate(g);
    if (*build_sets) return cmd_build_sets(g, data);
    if (*estimate_cmd) return cmd_estimate(g, data, !no_oracle);
    if (*experiment) return cmd_experiment(g);
    if (*compare) return cmd_compare(g);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
