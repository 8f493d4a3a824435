#include "sufset/sufficient_sets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "sufset/errors.hpp"

namespace sufset {

namespace {

SufficientSet from_tally(const std::map<int, int>& tally, int chosen, bool chosen_added, Protocol protocol) {
  SufficientSet set;
  set.chosen_alt = chosen;
  set.chosen_added = chosen_added;
  set.protocol = protocol;
  set.members.reserve(tally.size());
  set.counts.reserve(tally.size());
  for (auto [id, count] : tally) {
    set.members.push_back(id);
    set.counts.push_back(count);
  }
  return set;
}

}  // namespace

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::PPH: return "pph";
    case Protocol::IP: return "ip";
    case Protocol::RandomSample: return "random_sample";
    case Protocol::ImportanceSample: return "importance_sample";
  }
  return "unknown";
}

Protocol protocol_from_string(const std::string& name) {
  if (name == "pph") return Protocol::PPH;
  if (name == "ip") return Protocol::IP;
  if (name == "random_sample") return Protocol::RandomSample;
  if (name == "importance_sample") return Protocol::ImportanceSample;
  throw ConfigError("unknown protocol '" + name + "'");
}

int SufficientSet::position(int id) const {
  auto it = std::lower_bound(members.begin(), members.end(), id);
  return (it != members.end() && *it == id) ? static_cast<int>(it - members.begin()) : -1;
}

int SufficientSet::total_count() const {
  int total = 0;
  for (int c : counts) total += c;
  return total;
}

SufficientSet build_pph(const IndividualHistory& history) {
  if (history.instances.empty()) throw InvalidInput("history has no instances");
  std::map<int, int> tally;
  for (int r = 0; r < history.past_count(); ++r) ++tally[history.instances[static_cast<std::size_t>(r)].chosen];
  const int chosen = history.modeled().chosen;
  const bool added = !tally.contains(chosen);
  ++tally[chosen];
  SufficientSet set = from_tally(tally, chosen, added, Protocol::PPH);
  set.individual_id = history.id;
  return set;
}

SufficientSet build_ip(std::span<const IndividualHistory> cohort, int target_id) {
  if (cohort.empty()) throw InvalidInput("empty cohort");
  auto target = std::find_if(cohort.begin(), cohort.end(), [&](const auto& h) { return h.id == target_id; });
  if (target == cohort.end()) throw InvalidInput("target individual " + std::to_string(target_id) + " not in cohort");
  if (target->instances.empty()) throw InvalidInput("history has no instances");

  for (const auto& member : cohort) {
    if (member.instances.size() != target->instances.size())
      throw InvalidInput("cohort members differ in instance count");
    for (std::size_t r = 0; r < member.instances.size(); ++r)
      if (member.instances[r].attributes != target->instances[r].attributes)
        throw InvalidInput("cohort member " + std::to_string(member.id) +
                           " faces a different choice situation than the target");
  }

  std::map<int, int> tally;
  for (const auto& member : cohort) {
    const std::size_t upto = member.id == target_id ? member.instances.size() - 1 : member.instances.size();
    for (std::size_t r = 0; r < upto; ++r) ++tally[member.instances[r].chosen];
  }
  const int chosen = target->modeled().chosen;
  const bool added = !tally.contains(chosen);
  ++tally[chosen];
  SufficientSet set = from_tally(tally, chosen, added, Protocol::IP);
  set.individual_id = target_id;
  return set;
}

SufficientSet build_random_sample(const ChoiceContext& ctx, int chosen, int sample_size, Rng& rng) {
  if (ctx.position(chosen) < 0) throw InvalidInput("chosen alternative not in context");
  if (sample_size < 1 || sample_size > ctx.size())
    throw InvalidInput("sample size must lie in [1, " + std::to_string(ctx.size()) + "]");

  std::vector<int> others;
  others.reserve(static_cast<std::size_t>(ctx.size()));
  for (int id : ctx.alternatives())
    if (id != chosen) others.push_back(id);
  std::sort(others.begin(), others.end());

  SufficientSet set;
  std::sample(others.begin(), others.end(), std::back_inserter(set.members), sample_size - 1, rng);
  set.members.insert(std::lower_bound(set.members.begin(), set.members.end(), chosen), chosen);
  set.counts.assign(set.members.size(), 1);
  set.chosen_alt = chosen;
  set.protocol = Protocol::RandomSample;
  return set;
}

SufficientSet build_importance_sample(const ChoiceContext& ctx, int chosen, int draws, std::span<const double> q,
                                      Rng& rng) {
  if (ctx.position(chosen) < 0) throw InvalidInput("chosen alternative not in context");
  if (static_cast<int>(q.size()) != ctx.size()) throw InvalidInput("q must have one entry per alternative");
  if (draws < 0) throw InvalidInput("draw count must be >= 0");

  double total = 0.0;
  for (double v : q) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidInput("q must be finite and nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidInput("q must sum to 1");

  std::map<int, int> tally;
  for (int r = 0; r < draws; ++r) ++tally[ctx.alternatives()[static_cast<std::size_t>(sample_choice(q, rng))]];
  const bool added = !tally.contains(chosen);
  ++tally[chosen];
  return from_tally(tally, chosen, added, Protocol::ImportanceSample);
}

void write_sets(const std::filesystem::path& path, std::span<const SufficientSet> sets) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (const auto& s : sets) {
    nlohmann::json rec = {{"individual_id", s.individual_id},
                          {"protocol", to_string(s.protocol)},
                          {"members", s.members},
                          {"counts", s.counts},
                          {"chosen_added", s.chosen_added}};
    out << rec.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace sufset
