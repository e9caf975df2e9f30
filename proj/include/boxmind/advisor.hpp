#pragma once

#include "boxmind/predictor.hpp"
#include "boxmind/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace boxmind {

struct Recommendation {
  int index1 = 0;      // 1-based indicator index
  double gradient = 0; // standardized-space gradient, > 0
};

struct GradientReport {
  std::string boxer_id, opponent_id;
  double t = 0.0;
  Vec18 grad_std = Vec18::Zero();  // d(win prob)/d(standardized boxer indicators)
  Vec18 grad_raw = Vec18::Zero();  // chain-ruled to raw indicator units
  std::vector<Recommendation> top;
};

// Reverse-mode gradient of the antisymmetrized win probability with respect
// to the boxer's 18 standardized indicator inputs, averaged over both input
// orderings. Rejects embeddings-only models (the gradient is identically 0).
GradientReport win_gradient(const PredictorModel& model, const BoxerGraph& graph,
                            const std::string& boxer_id, const std::string& opponent_id,
                            double t);

// Largest positive-gradient indicators, at most k, ties broken by ascending
// indicator index. Gradients are ranked on the standardized scale.
std::vector<Recommendation> recommend(const GradientReport& report, int k = 5);

// Silverman's rule: 0.9 * min(sd, IQR/1.34) * n^(-1/5), floored at 1e-9.
double silverman_bandwidth(const std::vector<double>& samples);

// P(X > Y) for independent Gaussian KDEs over the two pools, closed form.
double kde_exceed_probability(const std::vector<double>& x_samples,
                              const std::vector<double>& y_samples);

// P(u > v) under the product-kernel KDE of paired samples, closed form.
double kde_exceed_probability_paired(const std::vector<std::pair<double, double>>& pairs);

struct AdvantageQuery {
  std::vector<double> boxer_samples;   // one value per footage match
  std::vector<double> level_samples;   // division-level pool
  std::vector<std::pair<double, double>> paired;  // (boxer, opponent) per match
};

// max(P(boxer > level), P(boxer > own opponents)); the paired term is
// skipped when no paired samples exist. Requires >= 2 samples per pool.
double advantage_probability(const AdvantageQuery& query);

// label 1 iff p > 0.5 (strict); throws on p outside [0,1].
std::vector<int> advantage_labels(const std::vector<double>& probabilities);

// Harmonic mean of precision and recall on label 1; nullopt when both
// predictions and references contain no positives.
std::optional<double> binary_f1(const std::vector<int>& predicted,
                                const std::vector<int>& reference);

}  // namespace boxmind
