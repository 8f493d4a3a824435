#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sufset/logit.hpp"
#include "sufset/scenario.hpp"

namespace sufset {

enum class Protocol { PPH, IP, RandomSample, ImportanceSample };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& name);

// Practical estimation set D_n. Members ascend by id; counts align with
// members.
struct SufficientSet {
  int individual_id = 0;
  std::vector<int> members;
  std::vector<int> counts;
  int chosen_alt = -1;
  bool chosen_added = false;  // final choice absent from the earlier draws
  Protocol protocol = Protocol::PPH;

  int size() const noexcept { return static_cast<int>(members.size()); }
  int position(int id) const;
  int chosen_position() const { return position(chosen_alt); }
  int total_count() const;

  bool operator==(const SufficientSet&) const = default;
};

// Distinct alternatives chosen over instances 1..R plus the modeled choice;
// n_j counts all R+1 instances.
SufficientSet build_pph(const IndividualHistory& history);

// Pools every cohort member's R+1 choices. Members must have identical
// attribute snapshots at every instance; the target must belong to the cohort.
SufficientSet build_ip(std::span<const IndividualHistory> cohort, int target_id);

// Chosen alternative plus a simple random sample of sample_size - 1
// nonchosen alternatives from the context. Counts are all 1.
SufficientSet build_random_sample(const ChoiceContext& ctx, int chosen, int sample_size, Rng& rng);

// `draws` iid draws from q (aligned with ctx alternatives), then the chosen
// alternative's count is incremented by one for the modeled instance.
SufficientSet build_importance_sample(const ChoiceContext& ctx, int chosen, int draws, std::span<const double> q,
                                      Rng& rng);

// One JSON line per set: individual_id, protocol, members, counts, chosen_added.
void write_sets(const std::filesystem::path& path, std::span<const SufficientSet> sets);

}  // namespace sufset
