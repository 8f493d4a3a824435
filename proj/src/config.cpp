#include "sufset/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

#include "sufset/errors.hpp"

namespace sufset {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
  std::set<std::string> names(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!names.contains(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + where + "." + key + "' has the wrong type");
  }
}

ScenarioConfig parse_scenario(const json& j) {
  only_keys(j, "scenario",
            {"N", "J", "K", "consideration_size", "R", "beta_true", "attribute_drift_sigma", "behavior_drift_delta",
             "consideration_churn", "cohort_size", "seed"});
  ScenarioConfig s;
  read(j, "N", s.N, "scenario");
  read(j, "J", s.J, "scenario");
  read(j, "K", s.K, "scenario");
  read(j, "consideration_size", s.consideration_size, "scenario");
  read(j, "R", s.R, "scenario");
  read(j, "beta_true", s.beta_true, "scenario");
  read(j, "attribute_drift_sigma", s.attribute_drift_sigma, "scenario");
  read(j, "behavior_drift_delta", s.behavior_drift_delta, "scenario");
  read(j, "consideration_churn", s.consideration_churn, "scenario");
  read(j, "cohort_size", s.cohort_size, "scenario");
  read(j, "seed", s.seed, "scenario");
  return s;
}

ProtocolConfig parse_protocol(const json& j) {
  only_keys(j, "protocol", {"kind", "sample_size", "draws", "q_column", "q_scale"});
  ProtocolConfig p;
  std::string kind = to_string(p.kind);
  read(j, "kind", kind, "protocol");
  p.kind = protocol_from_string(kind);
  read(j, "sample_size", p.sample_size, "protocol");
  read(j, "draws", p.draws, "protocol");
  read(j, "q_column", p.q_column, "protocol");
  read(j, "q_scale", p.q_scale, "protocol");
  return p;
}

CorrectionKind parse_correction(const json& j) {
  if (!j.is_string()) throw ConfigError("'correction' must be a string");
  return correction_from_string(j.get<std::string>());
}

}  // namespace

ConfigDocument parse_config(const json& doc) {
  only_keys(doc, "config",
            {"schema_version", "scenario", "protocol", "correction", "replications", "sweep", "output_path", "estimate",
             "compare"});
  if (!doc.contains("schema_version")) throw ConfigError("config lacks 'schema_version'");
  int version = 0;
  read(doc, "schema_version", version, "config");
  if (version != kConfigSchemaVersion) throw ConfigError("unsupported config schema_version " + std::to_string(version));

  ConfigDocument out;
  ExperimentConfig& e = out.experiment;
  if (doc.contains("scenario")) e.scenario = parse_scenario(doc["scenario"]);
  if (doc.contains("protocol")) e.protocol = parse_protocol(doc["protocol"]);
  if (doc.contains("correction")) e.correction = parse_correction(doc["correction"]);
  read(doc, "replications", e.replications, "config");
  read(doc, "output_path", e.output_path, "config");
  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    only_keys(s, "sweep", {"parameter", "values"});
    SweepConfig sweep;
    read(s, "parameter", sweep.parameter, "sweep");
    read(s, "values", sweep.values, "sweep");
    e.sweep = std::move(sweep);
  }
  if (doc.contains("estimate")) {
    const json& o = doc["estimate"];
    only_keys(o, "estimate", {"grad_tol", "max_iter", "beta_bound"});
    read(o, "grad_tol", e.estimate.grad_tol, "estimate");
    read(o, "max_iter", e.estimate.max_iter, "estimate");
    read(o, "beta_bound", e.estimate.beta_bound, "estimate");
  }
  if (doc.contains("compare")) {
    const json& list = doc["compare"];
    if (!list.is_array()) throw ConfigError("'compare' must be an array");
    for (const json& item : list) {
      only_keys(item, "compare[]", {"protocol", "correction"});
      ExperimentConfig c = e;
      c.sweep.reset();
      if (item.contains("protocol")) c.protocol = parse_protocol(item["protocol"]);
      if (item.contains("correction")) c.correction = parse_correction(item["correction"]);
      out.comparisons.push_back(std::move(c));
    }
  }
  return out;
}

ConfigDocument load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json j = {
      {"schema_version", kConfigSchemaVersion},
      {"scenario",
       {{"N", c.scenario.N},
        {"J", c.scenario.J},
        {"K", c.scenario.K},
        {"consideration_size", c.scenario.consideration_size},
        {"R", c.scenario.R},
        {"beta_true", c.scenario.beta_true},
        {"attribute_drift_sigma", c.scenario.attribute_drift_sigma},
        {"behavior_drift_delta", c.scenario.behavior_drift_delta},
        {"consideration_churn", c.scenario.consideration_churn},
        {"cohort_size", c.scenario.cohort_size},
        {"seed", c.scenario.seed}}},
      {"protocol",
       {{"kind", to_string(c.protocol.kind)},
        {"sample_size", c.protocol.sample_size},
        {"draws", c.protocol.draws},
        {"q_column", c.protocol.q_column},
        {"q_scale", c.protocol.q_scale}}},
      {"correction", to_string(c.correction)},
      {"replications", c.replications},
      {"output_path", c.output_path},
      {"estimate",
       {{"grad_tol", c.estimate.grad_tol}, {"max_iter", c.estimate.max_iter}, {"beta_bound", c.estimate.beta_bound}}},
  };
  if (c.sweep) j["sweep"] = {{"parameter", c.sweep->parameter}, {"values", c.sweep->values}};
  return j;
}

}  // namespace sufset
