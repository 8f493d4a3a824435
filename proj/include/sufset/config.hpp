#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sufset/experiment.hpp"

namespace sufset {

inline constexpr int kConfigSchemaVersion = 1;

// JSON document whose keys mirror ExperimentConfig:
//
//   {
//     "schema_version": 1,
//     "scenario": {"N", "J", "K", "consideration_size", "R", "beta_true",
//                  "attribute_drift_sigma", "behavior_drift_delta",
//                  "consideration_churn", "cohort_size", "seed"},
//     "protocol": {"kind": "pph|ip|random_sample|importance_sample",
//                  "sample_size", "draws", "q_column", "q_scale"},
//     "correction": "none|uniform_conditioning|known_importance|empirical_frequency",
//     "replications": 50,
//     "sweep": {"parameter": "R", "values": [3, 10, 30, 100]},
//     "output_path": "metrics.csv",
//     "estimate": {"grad_tol", "max_iter", "beta_bound"},
//     "compare": [{"protocol": {...}, "correction": "..."}]
//   }
//
// Every key is optional except schema_version; unknown keys are rejected.
struct ConfigDocument {
  ExperimentConfig experiment;
  std::vector<ExperimentConfig> comparisons;  // from "compare"
};

ConfigDocument parse_config(const nlohmann::json& doc);
ConfigDocument load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace sufset
