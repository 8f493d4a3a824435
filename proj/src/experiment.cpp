#include "sufset/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <span>

#include "sufset/errors.hpp"
#include "sufset/parallel.hpp"
#include "sufset/random.hpp"

namespace sufset {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int as_count(const std::string& name, double value) {
  if (value != std::floor(value) || value < 0 || value > 1e9)
    throw ConfigError("sweep value " + std::to_string(value) + " for '" + name + "' is not a count");
  return static_cast<int>(value);
}

std::vector<double> importance_weights(const Eigen::MatrixXd& attributes, const ProtocolConfig& p) {
  const Eigen::VectorXd q = softmax(attributes.col(p.q_column), p.q_scale);
  return {q.data(), q.data() + q.size()};
}

CorrectionSpec correction_for(CorrectionKind kind, const std::vector<double>& q) {
  switch (kind) {
    case CorrectionKind::None: return correction::None{};
    case CorrectionKind::UniformConditioning: return correction::UniformConditioning{};
    case CorrectionKind::KnownImportance: return correction::KnownImportance{q};
    case CorrectionKind::EmpiricalFrequency: return correction::EmpiricalFrequency{};
    case CorrectionKind::ExactReplacement: break;
  }
  throw ConfigError("exact_replacement is evaluation-only and cannot drive estimation");
}

void append_number(std::string& out, double v, const char* fmt = "%.10g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, fmt, v);
  out += buf;
}

void append_metrics(std::string& out, const MetricsRow& r) {
  append_number(out, r.bias);
  out += ',';
  append_number(out, r.rmse);
  out += ',';
  append_number(out, r.mc_se);
  out += ',';
  append_number(out, r.mean_set_size);
  out += ',';
  append_number(out, r.converged_share);
  out += '\n';
}

}  // namespace

void ExperimentConfig::validate() const {
  scenario.validate();
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (protocol.kind == Protocol::RandomSample && (protocol.sample_size < 1 || protocol.sample_size > scenario.J))
    throw ConfigError("protocol.sample_size must lie in [1, J]");
  if (protocol.kind == Protocol::ImportanceSample) {
    if (protocol.draws < 0) throw ConfigError("protocol.draws must be >= 0");
    if (protocol.q_column < 0 || protocol.q_column >= scenario.K)
      throw ConfigError("protocol.q_column must lie in [0, K)");
    if (!std::isfinite(protocol.q_scale)) throw ConfigError("protocol.q_scale must be finite");
  }
  if (correction == CorrectionKind::ExactReplacement)
    throw ConfigError("exact_replacement is evaluation-only and cannot drive estimation");
  if (correction == CorrectionKind::KnownImportance && protocol.kind != Protocol::ImportanceSample)
    throw ConfigError("known_importance requires the importance_sample protocol");
  if (correction == CorrectionKind::EmpiricalFrequency && protocol.kind == Protocol::RandomSample)
    throw ConfigError("empirical_frequency requires a counting protocol (pph, ip, importance_sample)");
  if (sweep) {
    if (sweep->values.empty()) throw ConfigError("sweep.values is empty");
    for (double v : sweep->values) at(sweep->parameter, v).scenario.validate();
  }
  if (estimate.grad_tol <= 0 || estimate.max_iter < 0 || estimate.beta_bound <= 0)
    throw ConfigError("invalid estimate options");
}

ExperimentConfig ExperimentConfig::at(const std::string& parameter, double value) const {
  ExperimentConfig c = *this;
  c.sweep.reset();
  if (parameter == "R") c.scenario.R = as_count(parameter, value);
  else if (parameter == "attribute_drift_sigma") c.scenario.attribute_drift_sigma = value;
  else if (parameter == "behavior_drift_delta") c.scenario.behavior_drift_delta = value;
  else if (parameter == "consideration_churn") c.scenario.consideration_churn = value;
  else if (parameter == "draws") c.protocol.draws = as_count(parameter, value);
  else if (parameter == "sample_size") c.protocol.sample_size = as_count(parameter, value);
  else throw ConfigError("cannot sweep over '" + parameter + "'");
  return c;
}

std::uint64_t replication_seed(const ExperimentConfig& config, int index) {
  return substream_seed(config.scenario.seed, {stream::replication, static_cast<std::uint64_t>(index)});
}

PreparedSample prepare_sample(const ChoiceHistory& history, const ExperimentConfig& config, std::uint64_t set_seed) {
  const int N = static_cast<int>(history.individuals.size());
  const int cohort = config.scenario.cohort_size;
  std::vector<SufficientSet> sets(static_cast<std::size_t>(N));
  std::vector<CorrectionTerms> terms(static_cast<std::size_t>(N));

  ExceptionSlot errors;
#pragma omp parallel for schedule(static)
  for (int n = 0; n < N; ++n) {
    errors.capture([&] {
      const IndividualHistory& ind = history.individuals[static_cast<std::size_t>(n)];
      const Instance& modeled = ind.modeled();
      std::vector<double> q;
      SufficientSet set;
      switch (config.protocol.kind) {
        case Protocol::PPH:
          set = build_pph(ind);
          break;
        case Protocol::IP: {
          const int first = (n / cohort) * cohort;
          const int size = std::min(N, first + cohort) - first;
          set = build_ip(std::span(history.individuals).subspan(static_cast<std::size_t>(first),
                                                                static_cast<std::size_t>(size)),
                         ind.id);
          break;
        }
        case Protocol::RandomSample: {
          Rng rng = make_rng(set_seed, {stream::sets, static_cast<std::uint64_t>(n)});
          set = build_random_sample(universal_context(modeled), modeled.chosen, config.protocol.sample_size, rng);
          break;
        }
        case Protocol::ImportanceSample: {
          Rng rng = make_rng(set_seed, {stream::sets, static_cast<std::uint64_t>(n)});
          q = importance_weights(modeled.attributes, config.protocol);
          set = build_importance_sample(universal_context(modeled), modeled.chosen, config.protocol.draws, q, rng);
          break;
        }
      }
      set.individual_id = ind.id;
      terms[static_cast<std::size_t>(n)] = correction_terms(correction_for(config.correction, q), set);
      sets[static_cast<std::size_t>(n)] = std::move(set);
    });
  }
  errors.rethrow();

  PreparedSample sample{std::move(sets), EstimationProblem(history.K)};
  for (int n = 0; n < N; ++n)
    sample.problem.add(sample.sets[static_cast<std::size_t>(n)],
                       history.individuals[static_cast<std::size_t>(n)].modeled().attributes,
                       terms[static_cast<std::size_t>(n)]);
  return sample;
}

ReplicationRecord run_replication(const ExperimentConfig& config, int index) {
  ReplicationRecord record;
  record.replication = index;
  record.mean_set_size = kNaN;
  try {
    ScenarioConfig scenario = config.scenario;
    scenario.seed = replication_seed(config, index);
    const Population pop = build_population(scenario);
    const ChoiceHistory history = simulate_history(pop, scenario);
    const PreparedSample sample = prepare_sample(history, config, scenario.seed);
    record.mean_set_size = sample.problem.mean_set_size();
    record.singletons = sample.problem.singleton_count();
    record.result = estimate(sample.problem, Eigen::VectorXd::Zero(scenario.K), config.estimate);
    record.ok = true;
  } catch (const EstimationError& e) {
    record.error = e.what();
  } catch (const std::exception& e) {
    record.error = std::string("replication failed: ") + e.what();
  }
  return record;
}

std::vector<ReplicationRecord> run_replications(const ExperimentConfig& config) {
  config.validate();
  std::vector<ReplicationRecord> records(static_cast<std::size_t>(config.replications));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < config.replications; ++r) records[static_cast<std::size_t>(r)] = run_replication(config, r);
  return records;
}

std::vector<MetricsRow> aggregate(const std::vector<ReplicationRecord>& records, const Eigen::VectorXd& beta_true,
                                  double sweep_value, int replications) {
  const Eigen::Index K = beta_true.size();
  std::vector<const ReplicationRecord*> used;
  double set_size_total = 0.0;
  int set_size_count = 0;
  for (const auto& rec : records) {
    if (rec.ok && rec.result.converged) used.push_back(&rec);
    if (std::isfinite(rec.mean_set_size)) {
      set_size_total += rec.mean_set_size;
      ++set_size_count;
    }
  }
  const double mean_set = set_size_count ? set_size_total / set_size_count : kNaN;
  const double share = replications ? static_cast<double>(used.size()) / replications : 0.0;
  const auto m = static_cast<double>(used.size());

  std::vector<MetricsRow> rows;
  for (Eigen::Index k = 0; k < K; ++k) {
    MetricsRow row;
    row.sweep_value = sweep_value;
    row.coef_index = static_cast<int>(k);
    row.mean_set_size = mean_set;
    row.converged_share = share;
    row.used = static_cast<int>(used.size());
    if (used.empty()) {
      row.bias = row.rmse = row.mc_se = kNaN;
    } else {
      double sum = 0.0, sq = 0.0;
      for (const auto* rec : used) {
        const double e = rec->result.beta_hat[k] - beta_true[k];
        sum += e;
        sq += e * e;
      }
      row.bias = sum / m;
      row.rmse = std::sqrt(sq / m);
      if (used.size() < 2) {
        row.mc_se = kNaN;
      } else {
        double dev = 0.0;
        for (const auto* rec : used) {
          const double e = rec->result.beta_hat[k] - beta_true[k] - row.bias;
          dev += e * e;
        }
        row.mc_se = std::sqrt(dev / (m - 1.0) / m);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<MetricsRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const SweepConfig sweep = config.sweep.value_or(SweepConfig{"R", {static_cast<double>(config.scenario.R)}});
  std::vector<MetricsRow> rows;
  for (double value : sweep.values) {
    const ExperimentConfig point = config.at(sweep.parameter, value);
    const auto records = run_replications(point);
    auto block = aggregate(records, point.scenario.beta(), value, point.replications);
    rows.insert(rows.end(), block.begin(), block.end());
  }
  if (!config.output_path.empty()) write_text(config.output_path, metrics_csv(rows));
  return rows;
}

std::vector<ComparisonRow> compare_protocols(const std::vector<ExperimentConfig>& configs) {
  if (configs.empty()) throw InvalidInput("nothing to compare");
  for (const auto& c : configs)
    if (!(c.scenario == configs.front().scenario)) throw InvalidInput("compared configurations use different scenarios");

  std::vector<ComparisonRow> rows;
  for (const auto& c : configs) {
    ExperimentConfig point = c;
    point.sweep.reset();
    const auto records = run_replications(point);
    for (const auto& m : aggregate(records, point.scenario.beta(), point.scenario.R, point.replications))
      rows.push_back({to_string(point.protocol.kind), to_string(point.correction), m});
  }
  return rows;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out = "sweep_value,coef_index,bias,rmse,mc_se,mean_set_size,converged_share\n";
  for (const auto& r : rows) {
    append_number(out, r.sweep_value);
    out += ',' + std::to_string(r.coef_index) + ',';
    append_metrics(out, r);
  }
  return out;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "protocol,correction,coef_index,bias,rmse,mc_se,mean_set_size,converged_share\n";
  for (const auto& r : rows) {
    out += r.protocol + ',' + r.correction + ',' + std::to_string(r.metrics.coef_index) + ',';
    append_metrics(out, r.metrics);
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace sufset
