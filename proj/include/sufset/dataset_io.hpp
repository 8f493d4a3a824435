#pragma once

#include <filesystem>
#include <optional>

#include "sufset/scenario.hpp"

namespace sufset {

inline constexpr int kDatasetSchemaVersion = 1;

// Public dataset, JSON lines, UTF-8:
//   {"record":"header","schema_version":1,"N":..,"J":..,"K":..,"R":..}
//   {"individual_id":n,"instance":r,"chosen_alt":j,"attributes":[[..K..] x J]}
// one record per (individual, instance), ordered by individual then instance.
//
// Oracle sidecar, JSON lines: one record per individual with
//   {"individual_id","consideration_set","beta_true","attribute_drift_sigma",
//    "behavior_drift_delta","consideration_churn",
//    "instances":[{"instance","consideration_set","beta"}]}
void write_dataset(const ChoiceHistory& history, const std::filesystem::path& path);
void write_oracle(const ChoiceHistory& history, const std::filesystem::path& path);

// Throws ParseError (with the 1-based line) on malformed records or missing
// fields; the message names the missing field.
ChoiceHistory read_dataset(const std::filesystem::path& path);

// Attaches the sidecar to a history read from the public file.
void read_oracle(ChoiceHistory& history, const std::filesystem::path& path);

// read_dataset plus read_oracle when the sidecar exists.
ChoiceHistory read_dataset(const std::filesystem::path& path, const std::optional<std::filesystem::path>& oracle);

}  // namespace sufset
