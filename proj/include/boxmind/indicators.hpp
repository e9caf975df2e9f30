#pragma once

#include "boxmind/event_model.hpp"
#include "boxmind/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace boxmind {

enum class Rhythm { proactive, counter, follow_up };

// Contiguous run of one boxer's punches with short start-to-start gaps.
struct Combination {
  std::vector<std::size_t> member_indices;  // indices into the boxer's punch list
  enum class Kind { straight_straight, hook, uppercut } kind;
};

// 18-indicator profile plus the degenerate-input flags downstream needs.
struct IndicatorProfile {
  Vec18 values = Vec18::Zero();
  bool sparse = false;   // boxer threw no punches
  int punch_count = 0;
  double footage_minutes = 0.0;
};

// One rhythm label per punch of `boxer_id`, in event order.
// A punch is a counter iff its t_start lies in (s, s+0.2] for some opponent
// punch start s; otherwise proactive iff the pause since the latest prior
// t_end of any punch exceeds 1.0 s (the round's first punch is proactive);
// otherwise follow-up.
std::vector<Rhythm> classify_rhythm(const RoundRecord& round, const std::string& boxer_id);

// Maximal runs of the boxer's punches with consecutive t_start gaps <= window
// and length >= 2. Kind priority: uppercut > hook > straight_straight.
std::vector<Combination> segment_combinations(const RoundRecord& round,
                                              const std::string& boxer_id,
                                              double window = 1.0);

// Aggregates rounds into the 18-indicator profile. Throws on zero rounds;
// zero punches yields all-zero proportions with the sparse flag set.
IndicatorProfile aggregate_indicators(std::span<const RoundRecord> rounds,
                                      const std::string& boxer_id,
                                      double combo_window = 1.0);
IndicatorProfile aggregate_indicators(const std::vector<RoundRecord>& rounds,
                                      const std::string& boxer_id,
                                      double combo_window = 1.0);

// Unweighted mean of per-match profiles strictly before `before`. Matches
// without footage contribute nothing; nullopt when no footage exists (the
// caller substitutes the standardized-space zero sentinel).
std::optional<Vec18> historical_profile(
    std::span<const std::pair<Date, Vec18>> match_profiles, Date before);

bool satisfies_indicator_invariants(const Vec18& v, double tol = 1e-9);

}  // namespace boxmind
