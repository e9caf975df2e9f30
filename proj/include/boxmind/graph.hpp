#pragma once

#include "boxmind/event_model.hpp"
#include "boxmind/indicators.hpp"
#include "boxmind/types.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace boxmind {

struct BoxerNode {
  std::string boxer_id;
  // D x C: column c holds the degree-c polynomial coefficient vector.
  Mat embedding_coeffs;
};

struct MatchEdge {
  std::string match_id;
  std::string boxer_a;
  std::string boxer_b;
  Date date;
  double t = 0.0;      // normalized time over the dataset span
  char winner = 'a';
  bool footage = false;
  std::optional<Vec18> ind_a;  // per-side match indicators, present iff footage
  std::optional<Vec18> ind_b;

  const std::string& winner_id() const { return winner == 'a' ? boxer_a : boxer_b; }
};

struct BoxerGraph {
  std::map<std::string, BoxerNode> nodes;  // sorted iteration by boxer_id
  std::vector<MatchEdge> edges;            // sorted by date (stable)
  Date epoch;                              // earliest match date
  std::int64_t span_days = 0;              // latest - earliest, 0 collapses t to 0
  int dim_d = 8;
  int order_c = 2;

  double normalize_time(Date d) const {
    if (span_days == 0) return 0.0;
    return double(d.days - epoch.days) / double(span_days);
  }
  Date denormalize_time(double t) const {
    return Date{epoch.days + std::int64_t(std::llround(t * double(span_days)))};
  }
};

// One node per distinct boxer, one edge per match; per-side indicators are
// aggregated from the match's rounds when footage exists. Embedding
// coefficients are seeded uniform in [-0.1, 0.1], node order sorted by id.
BoxerGraph build_graph(const std::vector<MatchRecord>& matches, int dim_d, int order_c,
                       std::uint64_t seed = 0);

// train = edges dated < cutoff, test = edges dated >= cutoff; order preserved.
std::pair<std::vector<MatchEdge>, std::vector<MatchEdge>> temporal_split(
    const BoxerGraph& graph, Date cutoff);

void save_graph(const BoxerGraph& graph, const std::string& path);
BoxerGraph load_graph(const std::string& path);

std::string graph_to_json(const BoxerGraph& graph);
BoxerGraph graph_from_json(const std::string& text);

// Per-(date, side profile) history of one boxer's footage edges, for
// historical_profile queries.
std::vector<std::pair<Date, Vec18>> footage_history(const std::vector<MatchEdge>& edges,
                                                    const std::string& boxer_id);

}  // namespace boxmind
