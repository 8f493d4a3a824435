#include "sufset/dataset_io.hpp"

#include <fstream>
#include <string>

#include <json.hpp>

#include "sufset/errors.hpp"

namespace sufset {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

const json& field(const json& record, const char* name, std::size_t line) {
  auto it = record.find(name);
  if (it == record.end()) throw ParseError(line, std::string("missing required field '") + name + "'");
  return *it;
}

template <typename T>
T get_as(const json& record, const char* name, std::size_t line) {
  const json& value = field(record, name, line);
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ParseError(line, std::string("field '") + name + "' has the wrong type");
  }
}

Eigen::MatrixXd matrix_from_json(const json& value, int rows, int cols, const char* name, std::size_t line) {
  if (!value.is_array() || static_cast<int>(value.size()) != rows)
    throw ParseError(line, std::string("field '") + name + "' must have " + std::to_string(rows) + " rows");
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = value[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ParseError(line, std::string("field '") + name + "' must have " + std::to_string(cols) + " columns");
    for (int k = 0; k < cols; ++k) {
      if (!row[static_cast<std::size_t>(k)].is_number())
        throw ParseError(line, std::string("field '") + name + "' holds a non-number");
      m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd vector_from(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json parse_line(const std::string& text, std::size_t line) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw ParseError(line, "record is not a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ParseError(line, std::string("malformed JSON: ") + e.what());
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_dataset(const ChoiceHistory& history, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  json header = {{"record", "header"}, {"schema_version", kDatasetSchemaVersion}, {"N", history.N},
                 {"J", history.J},     {"K", history.K},                          {"R", history.R}};
  out << header.dump() << '\n';
  for (const auto& ind : history.individuals) {
    for (const auto& inst : ind.instances) {
      json rec = {{"individual_id", ind.id},
                  {"instance", inst.index},
                  {"chosen_alt", inst.chosen},
                  {"attributes", matrix_to_json(inst.attributes)}};
      out << rec.dump() << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_oracle(const ChoiceHistory& history, const std::filesystem::path& path) {
  if (!history.oracle) throw InvalidInput("history carries no oracle information");
  const OracleInfo& oracle = *history.oracle;
  std::ofstream out = open_out(path);
  for (std::size_t n = 0; n < history.individuals.size(); ++n) {
    const auto& ind = history.individuals[n];
    json instances = json::array();
    for (const auto& inst : ind.instances)
      instances.push_back(
          {{"instance", inst.index}, {"consideration_set", inst.consideration}, {"beta", vector_to_json(inst.beta)}});
    json rec = {{"individual_id", ind.id},
                {"consideration_set", oracle.consideration_sets.at(n)},
                {"beta_true", vector_to_json(oracle.beta_true)},
                {"attribute_drift_sigma", oracle.attribute_drift_sigma},
                {"behavior_drift_delta", oracle.behavior_drift_delta},
                {"consideration_churn", oracle.consideration_churn},
                {"instances", std::move(instances)}};
    out << rec.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ChoiceHistory read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  std::string text;
  std::size_t line = 0;
  ChoiceHistory history;
  bool have_header = false;

  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    json rec = parse_line(text, line);
    if (!have_header) {
      if (rec.value("record", std::string()) != "header") throw ParseError(line, "first record must be the header");
      const int version = get_as<int>(rec, "schema_version", line);
      if (version != kDatasetSchemaVersion)
        throw ParseError(line, "unsupported schema_version " + std::to_string(version));
      history.N = get_as<int>(rec, "N", line);
      history.J = get_as<int>(rec, "J", line);
      history.K = get_as<int>(rec, "K", line);
      history.R = get_as<int>(rec, "R", line);
      if (history.N < 1 || history.J < 1 || history.K < 1 || history.R < 0)
        throw ParseError(line, "header dimensions out of range");
      history.individuals.resize(static_cast<std::size_t>(history.N));
      for (int n = 0; n < history.N; ++n) history.individuals[static_cast<std::size_t>(n)].id = n;
      have_header = true;
      continue;
    }

    const int id = get_as<int>(rec, "individual_id", line);
    const int index = get_as<int>(rec, "instance", line);
    const int chosen = get_as<int>(rec, "chosen_alt", line);
    if (id < 0 || id >= history.N) throw ParseError(line, "individual_id out of range");
    if (chosen < 0 || chosen >= history.J) throw ParseError(line, "chosen_alt out of range");
    auto& ind = history.individuals[static_cast<std::size_t>(id)];
    if (index != static_cast<int>(ind.instances.size()) + 1)
      throw ParseError(line, "instance " + std::to_string(index) + " out of order for individual " +
                                 std::to_string(id));
    if (index > history.R + 1) throw ParseError(line, "instance exceeds R+1");

    Instance inst;
    inst.index = index;
    inst.chosen = chosen;
    inst.attributes = matrix_from_json(field(rec, "attributes", line), history.J, history.K, "attributes", line);
    ind.instances.push_back(std::move(inst));
  }

  if (!have_header) throw ParseError(line, "missing header record");
  for (const auto& ind : history.individuals)
    if (static_cast<int>(ind.instances.size()) != history.R + 1)
      throw ParseError(line, "individual " + std::to_string(ind.id) + " has " + std::to_string(ind.instances.size()) +
                                 " instances, expected " + std::to_string(history.R + 1));
  return history;
}

void read_oracle(ChoiceHistory& history, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  OracleInfo oracle;
  oracle.consideration_sets.resize(history.individuals.size());
  std::vector<bool> seen(history.individuals.size(), false);
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    json rec = parse_line(text, line);
    const int id = get_as<int>(rec, "individual_id", line);
    if (id < 0 || id >= history.N) throw ParseError(line, "individual_id out of range");
    oracle.consideration_sets[static_cast<std::size_t>(id)] = get_as<std::vector<int>>(rec, "consideration_set", line);
    oracle.beta_true = vector_from(get_as<std::vector<double>>(rec, "beta_true", line));
    oracle.attribute_drift_sigma = get_as<double>(rec, "attribute_drift_sigma", line);
    oracle.behavior_drift_delta = get_as<double>(rec, "behavior_drift_delta", line);
    oracle.consideration_churn = get_as<double>(rec, "consideration_churn", line);

    const json& instances = field(rec, "instances", line);
    auto& ind = history.individuals[static_cast<std::size_t>(id)];
    if (!instances.is_array() || instances.size() != ind.instances.size())
      throw ParseError(line, "field 'instances' must list every instance");
    for (std::size_t r = 0; r < instances.size(); ++r) {
      const json& ir = instances[r];
      if (get_as<int>(ir, "instance", line) != ind.instances[r].index)
        throw ParseError(line, "instance index mismatch");
      ind.instances[r].consideration = get_as<std::vector<int>>(ir, "consideration_set", line);
      ind.instances[r].beta = vector_from(get_as<std::vector<double>>(ir, "beta", line));
    }
    seen[static_cast<std::size_t>(id)] = true;
  }
  for (std::size_t n = 0; n < seen.size(); ++n)
    if (!seen[n]) throw ParseError(line, "oracle sidecar lacks individual " + std::to_string(n));
  history.oracle = std::move(oracle);
}

ChoiceHistory read_dataset(const std::filesystem::path& path, const std::optional<std::filesystem::path>& oracle) {
  ChoiceHistory history = read_dataset(path);
  if (oracle && std::filesystem::exists(*oracle)) read_oracle(history, *oracle);
  return history;
}

}  // namespace sufset
