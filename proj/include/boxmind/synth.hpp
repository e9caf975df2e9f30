#pragma once

#include "boxmind/event_model.hpp"
#include "boxmind/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace boxmind {

struct WorldConfig {
  int n_boxers = 40;
  int n_matches = 500;
  Date start_date = Date{parse_date("2021-01-01")};
  Date end_date = Date{parse_date("2024-06-30")};
  double strength_scale = 1.0;  // dispersion of latent strength at t = 0
  double drift_scale = 0.5;     // dispersion of strength change over the span
  double style_scale = 1.0;     // weight of the payoff term vs strength
  Vec18 payoff = Vec18::Zero(); // linear payoff over z-scored styles
  double matchup_scale = 0.0;   // weight of the antisymmetric style-matchup term
  int style_pool = 0;           // 0 = unique style per boxer, else shared archetypes
  double temperature = 1.0;
  double footage_fraction = 0.85;
  int rounds_per_match = 2;
  double round_duration = 420.0;
  int punch_budget = 120;       // primary boxer's punches per footage round
  std::uint64_t seed = 0;
};

struct BoxerTruth {
  std::string id;
  double strength0 = 0.0;  // latent strength at t = 0
  double strength1 = 0.0;  // latent strength at t = 1
  Vec18 style = Vec18::Zero();

  double strength_at(double t) const { return strength0 + (strength1 - strength0) * t; }
};

struct GroundTruth {
  Vec18 payoff = Vec18::Zero();
  double temperature = 1.0;
  double style_scale = 1.0;
  std::vector<BoxerTruth> boxers;
  Vec18 style_mean = Vec18::Zero();   // population statistics used for z-scoring
  Vec18 style_stdev = Vec18::Ones();
  // Antisymmetric matchup weights over z-scored styles; zero by default.
  Mat matchup = Mat::Zero(kNumIndicators, kNumIndicators);

  // True probability that a beats b at time t.
  double win_probability(const BoxerTruth& a, const BoxerTruth& b, double t) const;
};

// Mixed-sign payoff vector with unit-scale entries, seeded.
Vec18 default_payoff(std::uint64_t seed);

// Deterministic synthetic dataset: known strength trajectories and styles,
// outcomes sampled from the logistic payoff model, footage rounds realized
// through generate_event_stream.
std::pair<std::vector<MatchRecord>, GroundTruth> generate_world(const WorldConfig& config);

// Single-boxer round whose aggregated indicators approach `style` as the
// punch budget grows. A sparse set of opponent punches is included to realize
// the counter proportion. Throws std::invalid_argument on infeasible styles.
RoundRecord generate_event_stream(const Vec18& style, double duration, std::uint64_t seed,
                                  int punch_budget = 500,
                                  const std::string& boxer_id = "boxer",
                                  const std::string& opponent_id = "_opp",
                                  const std::string& round_id = "r1");

// Random style known to be realizable at the given budget and duration
// (built by realizing a random stream and reading its indicators back).
Vec18 random_feasible_style(std::uint64_t seed, int punch_budget = 500,
                            double duration = 1800.0);

std::string ground_truth_to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const std::string& text);

}  // namespace boxmind
