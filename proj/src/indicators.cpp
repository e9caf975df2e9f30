#include "boxmind/indicators.hpp"

#include <algorithm>
#include <stdexcept>

namespace boxmind {

namespace {

std::vector<std::size_t> boxer_event_indices(const RoundRecord& round,
                                             const std::string& boxer_id) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < round.events.size(); ++i)
    if (round.events[i].boxer_id == boxer_id) idx.push_back(i);
  return idx;
}

}  // namespace

std::vector<Rhythm> classify_rhythm(const RoundRecord& round, const std::string& boxer_id) {
  auto mine = boxer_event_indices(round, boxer_id);

  std::vector<Rhythm> labels;
  labels.reserve(mine.size());
  for (std::size_t i : mine) {
    const auto& p = round.events[i];

    bool counter = false;
    for (const auto& o : round.events) {
      if (o.boxer_id == boxer_id) continue;
      const double s = o.t_start;
      if (p.t_start > s && p.t_start <= s + 0.2) {
        counter = true;
        break;
      }
    }
    if (counter) {
      labels.push_back(Rhythm::counter);
      continue;
    }

    // Latest prior t_end across punches (either boxer) starting before p.
    double latest_end = -1.0;
    bool any_prior = false;
    for (std::size_t j = 0; j < round.events.size(); ++j) {
      if (j == i) continue;
      const auto& q = round.events[j];
      if (q.t_start < p.t_start || (q.t_start == p.t_start && j < i)) {
        any_prior = true;
        latest_end = std::max(latest_end, q.t_end);
      }
    }
    if (!any_prior || p.t_start - latest_end > 1.0)
      labels.push_back(Rhythm::proactive);
    else
      labels.push_back(Rhythm::follow_up);
  }
  return labels;
}

std::vector<Combination> segment_combinations(const RoundRecord& round,
                                              const std::string& boxer_id,
                                              double window) {
  if (!(window > 0)) throw std::invalid_argument("combination window must be > 0");
  auto mine = boxer_event_indices(round, boxer_id);

  std::vector<Combination> combos;
  std::size_t run_begin = 0;
  auto flush = [&](std::size_t run_end) {  // [run_begin, run_end) over `mine`
    if (run_end - run_begin < 2) return;
    Combination c;
    bool has_hook = false, has_upper = false;
    for (std::size_t k = run_begin; k < run_end; ++k) {
      c.member_indices.push_back(k);
      const auto& e = round.events[mine[k]];
      has_hook |= (e.tech == Tech::hook);
      has_upper |= (e.tech == Tech::uppercut);
    }
    c.kind = has_upper ? Combination::Kind::uppercut
             : has_hook ? Combination::Kind::hook
                        : Combination::Kind::straight_straight;
    combos.push_back(std::move(c));
  };

  for (std::size_t k = 1; k < mine.size(); ++k) {
    const double gap = round.events[mine[k]].t_start - round.events[mine[k - 1]].t_start;
    if (gap > window) {
      flush(k);
      run_begin = k;
    }
  }
  flush(mine.size());
  return combos;
}

IndicatorProfile aggregate_indicators(std::span<const RoundRecord> rounds,
                                      const std::string& boxer_id,
                                      double combo_window) {
  if (rounds.empty()) throw std::invalid_argument("aggregate_indicators: zero rounds");

  double minutes = 0.0;
  for (const auto& r : rounds) minutes += r.duration / 60.0;
  if (!(minutes > 0)) throw std::invalid_argument("aggregate_indicators: zero footage minutes");

  int total = 0;
  int n_close_mid = 0, n_lead = 0, n_torso = 0, n_straight = 0, n_ml_hook = 0;
  int e_close_mid = 0, e_long = 0, e_lead = 0, e_rear = 0, e_torso = 0, e_head = 0;
  int e_straight = 0, e_ml_hook = 0;
  int n_proactive = 0, n_counter = 0;
  int c_ss = 0, c_hook = 0, c_upper = 0;

  for (const auto& r : rounds) {
    for (const auto& e : r.events) {
      if (e.boxer_id != boxer_id) continue;
      ++total;
      const bool close_mid = (e.dist == Dist::close || e.dist == Dist::mid);
      const bool eff = (e.eff == Eff::effective);
      const bool ml_hook = (e.tech == Tech::hook && !(e.dist == Dist::close));
      n_close_mid += close_mid;
      n_lead += (e.hand == Hand::lead);
      n_torso += (e.target == Target::torso);
      n_straight += (e.tech == Tech::straight);
      n_ml_hook += ml_hook;
      if (eff) {
        (close_mid ? e_close_mid : e_long)++;
        (e.hand == Hand::lead ? e_lead : e_rear)++;
        (e.target == Target::torso ? e_torso : e_head)++;
        if (e.tech == Tech::straight) ++e_straight;
        if (ml_hook) ++e_ml_hook;
      }
    }
    bool present = false;
    for (const auto& e : r.events) present |= (e.boxer_id == boxer_id);
    if (present) {
      for (Rhythm l : classify_rhythm(r, boxer_id)) {
        n_proactive += (l == Rhythm::proactive);
        n_counter += (l == Rhythm::counter);
      }
      for (const auto& c : segment_combinations(r, boxer_id, combo_window)) {
        switch (c.kind) {
          case Combination::Kind::straight_straight: ++c_ss; break;
          case Combination::Kind::hook: ++c_hook; break;
          case Combination::Kind::uppercut: ++c_upper; break;
        }
      }
    }
  }

  IndicatorProfile out;
  out.punch_count = total;
  out.footage_minutes = minutes;
  out.sparse = (total == 0);

  const double P = total > 0 ? double(total) : 1.0;  // sparse rounds keep proportions 0
  const int combos = c_ss + c_hook + c_upper;
  const double K = combos > 0 ? double(combos) : 1.0;

  Vec18& v = out.values;
  v[0] = n_close_mid / P;
  v[1] = e_close_mid / minutes;
  v[2] = e_long / minutes;
  v[3] = n_lead / P;
  v[4] = e_lead / minutes;
  v[5] = e_rear / minutes;
  v[6] = n_torso / P;
  v[7] = e_torso / minutes;
  v[8] = e_head / minutes;
  v[9] = n_straight / P;
  v[10] = e_straight / minutes;
  v[11] = n_ml_hook / P;
  v[12] = e_ml_hook / minutes;
  v[13] = n_proactive / P;
  v[14] = n_counter / P;
  v[15] = c_ss / K;
  v[16] = c_hook / K;
  v[17] = c_upper / K;
  return out;
}

IndicatorProfile aggregate_indicators(const std::vector<RoundRecord>& rounds,
                                      const std::string& boxer_id,
                                      double combo_window) {
  return aggregate_indicators(std::span<const RoundRecord>(rounds), boxer_id, combo_window);
}

std::optional<Vec18> historical_profile(
    std::span<const std::pair<Date, Vec18>> match_profiles, Date before) {
  Vec18 sum = Vec18::Zero();
  int n = 0;
  for (const auto& [date, profile] : match_profiles) {
    if (date < before) {
      sum += profile;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return Vec18(sum / double(n));
}

bool satisfies_indicator_invariants(const Vec18& v, double tol) {
  for (int k = 0; k < kNumIndicators; ++k) {
    if (!std::isfinite(v[k]) || v[k] < -tol) return false;
    if (indicator_is_proportion(k + 1) && v[k] > 1 + tol) return false;
  }
  const double combo_sum = v[15] + v[16] + v[17];
  if (combo_sum > tol && std::abs(combo_sum - 1.0) > tol) return false;
  if (v[13] + v[14] > 1 + tol) return false;
  return true;
}

}  // namespace boxmind
