#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sufset/corrections.hpp"
#include "sufset/estimation.hpp"
#include "sufset/scenario.hpp"
#include "sufset/sufficient_sets.hpp"

namespace sufset {

struct ProtocolConfig {
  Protocol kind = Protocol::PPH;
  int sample_size = 5;   // random_sample: |D| including the chosen alternative
  int draws = 10;        // importance_sample: draws with replacement
  int q_column = 0;      // importance_sample: q_j ∝ exp(q_scale * x_{j, q_column})
  double q_scale = 1.0;

  bool operator==(const ProtocolConfig&) const = default;
};

// Swept scenario/protocol field: R, attribute_drift_sigma,
// behavior_drift_delta, consideration_churn, draws or sample_size.
struct SweepConfig {
  std::string parameter = "R";
  std::vector<double> values;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  ProtocolConfig protocol;
  CorrectionKind correction = CorrectionKind::None;
  int replications = 1;
  std::optional<SweepConfig> sweep;
  std::string output_path;
  EstimateOptions estimate;

  // Throws ConfigError.
  void validate() const;

  // Copy with the swept field set to `value`.
  ExperimentConfig at(const std::string& parameter, double value) const;
};

struct ReplicationRecord {
  int replication = 0;
  bool ok = false;          // estimation returned a result
  std::string error;        // why not, when !ok
  EstimationResult result;  // valid when ok
  double mean_set_size = 0.0;
  int singletons = 0;
};

struct MetricsRow {
  double sweep_value = 0.0;
  int coef_index = 0;
  double bias = 0.0;
  double rmse = 0.0;
  double mc_se = 0.0;
  double mean_set_size = 0.0;
  double converged_share = 0.0;
  int used = 0;  // converged replications aggregated; 0 flags the row
};

// Practical sets and correction terms for every individual of a history.
struct PreparedSample {
  std::vector<SufficientSet> sets;
  EstimationProblem problem;
};
PreparedSample prepare_sample(const ChoiceHistory& history, const ExperimentConfig& config, std::uint64_t set_seed);

// Scenario seed of replication `index`: a substream of the configured seed.
std::uint64_t replication_seed(const ExperimentConfig& config, int index);

// generate -> build sets -> correct -> estimate; never throws for
// estimation failures, which land in the record.
ReplicationRecord run_replication(const ExperimentConfig& config, int index);

// Replications in parallel, folded in index order.
std::vector<ReplicationRecord> run_replications(const ExperimentConfig& config);

std::vector<MetricsRow> aggregate(const std::vector<ReplicationRecord>& records, const Eigen::VectorXd& beta_true,
                                  double sweep_value, int replications);

// One row per (sweep value, coefficient); writes CSV when output_path is set.
std::vector<MetricsRow> run_experiment(const ExperimentConfig& config);

struct ComparisonRow {
  std::string protocol;
  std::string correction;
  MetricsRow metrics;
};

// Same scenario, one block of rows per (protocol, correction). Throws
// InvalidInput when scenarios differ.
std::vector<ComparisonRow> compare_protocols(const std::vector<ExperimentConfig>& configs);

// Columns: sweep_value,coef_index,bias,rmse,mc_se,mean_set_size,converged_share
std::string metrics_csv(const std::vector<MetricsRow>& rows);
// Columns: protocol,correction,coef_index,bias,rmse,mc_se,mean_set_size,converged_share
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace sufset
