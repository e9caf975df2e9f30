#pragma once

#include "boxmind/graph.hpp"
#include "boxmind/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace boxmind {

// ---------------------------------------------------------------- Elo

struct EloParams {
  double k = 32.0;
  double initial = 1500.0;
};

// Returns (r_a', r_b'); score_a is 1 for a win, 0 for a loss.
std::pair<double, double> elo_update(double r_a, double r_b, double score_a, double k);
double elo_expected(double r_a, double r_b);

// ---------------------------------------------------------------- Glicko

struct GlickoParams {
  double initial_rating = 1500.0;
  double initial_rd = 350.0;
  double min_rd = 1e-6;
  double max_rd = 350.0;
  // RD regrowth constant per sqrt(day); default regrows 50 -> 350 over 365 idle days.
  double c = 0.0;

  double c_or_default() const;
};

struct GlickoOpponent {
  double rating = 1500.0;
  double rd = 350.0;
  double score = 0.0;  // 1 win, 0 loss
};

// One rating-period posterior update from Glickman's equations.
std::pair<double, double> glicko_update(double rating, double rd,
                                        const std::vector<GlickoOpponent>& results);

double glicko_g(double rd);
double glicko_expected(double r, double r_j, double rd_j);
// Pre-match expectation with both deviations folded into g.
double glicko_predict(double r_a, double rd_a, double r_b, double rd_b);

// ---------------------------------------------------------------- WHR

struct WhrParams {
  double w2 = 0.0004;          // Wiener variance per day, natural units^2
  double prior_var = 1.0;      // Gaussian prior on each boxer's first knot
  double tol = 1e-6;           // max |delta r| convergence threshold
  int max_sweeps = 200;
};

struct WhrKnot {
  std::int64_t day = 0;
  double r = 0.0;  // natural (logistic) rating
};

struct WhrGame {
  std::string winner, loser;
  std::int64_t day = 0;
};

struct WhrState {
  std::map<std::string, std::vector<WhrKnot>> trajectories;  // knots sorted by day
  std::vector<WhrGame> games;
  WhrParams params;
  bool converged = true;
  std::vector<double> objective_trace;  // objective after each damped sweep

  // Flat extrapolation beyond the trajectory ends, linear in between;
  // 0 for unrated boxers.
  double rating_at(const std::string& boxer_id, std::int64_t day) const;
};

double whr_objective(const WhrState& state);
// Damped Newton sweeps until convergence; objective is non-decreasing per sweep.
void whr_refit(WhrState& state);
WhrState whr_fit(const std::vector<MatchEdge>& edges, const WhrParams& params = {});
void whr_add_game(WhrState& state, const WhrGame& game);

double whr_predict(const WhrState& state, const std::string& a, const std::string& b,
                   std::int64_t day);

// ---------------------------------------------------------------- harness

enum class RatingSystem { elo, glicko, whr };
RatingSystem rating_system_from_string(const std::string& name);
const std::string& to_string(RatingSystem s);

struct BaselineConfig {
  RatingSystem system = RatingSystem::elo;
  EloParams elo;
  GlickoParams glicko;
  WhrParams whr;
};

struct WalkForwardResult {
  double accuracy = 0.0;  // over scored edges (date >= cutoff)
  int correct = 0;
  int total = 0;
  int ties = 0;
  std::vector<double> probabilities;  // per scored edge, for boxer_a
  std::map<std::string, double> final_ratings;
};

// Walk-forward evaluation: each edge is predicted from strictly earlier
// information, then the system is updated with its outcome. Only edges
// dated >= cutoff are scored; a probability of exactly 0.5 counts as
// incorrect.
WalkForwardResult walk_forward(const std::vector<MatchEdge>& edges, Date cutoff,
                               const BaselineConfig& config);

}  // namespace boxmind
