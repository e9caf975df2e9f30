#pragma once

#include "boxmind/diff_core.hpp"
#include "boxmind/graph.hpp"
#include "boxmind/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace boxmind {

enum class PredictorMode { unified, indicators_only, embeddings_only };

const std::string& to_string(PredictorMode mode);
PredictorMode predictor_mode_from_string(const std::string& name);

struct TrainConfig {
  double lr = 0.02;
  int epochs = 800;
  double weight_decay = 1e-5;
  double alpha = 0.02;  // indicator reconstruction weight
  double beta = 1.0;    // outcome cross-entropy weight
  std::uint64_t seed = 0;
  std::vector<int> hidden = {64, 32};
};

// Per-indicator standardization statistics over the training footage edges.
struct Standardization {
  Vec18 mean = Vec18::Zero();
  Vec18 stdev = Vec18::Ones();  // floored at 1e-6

  Vec18 apply(const Vec18& raw) const { return (raw - mean).cwiseQuotient(stdev); }
  Vec18 invert(const Vec18& std_space) const { return std_space.cwiseProduct(stdev) + mean; }
};

struct PredictorModel {
  MlpSpec spec;  // input 2*(18+D) -> hidden -> 2 outcome logits + 36 indicators
  ParamSet params;                        // net weights plus "emb/<boxer_id>" tables
  Standardization stand;
  int dim_d = 8;
  int order_c = 2;
  PredictorMode mode = PredictorMode::unified;
  std::uint64_t seed = 0;
  int epoch = 0;

  static std::string embedding_key(const std::string& boxer_id) { return "emb/" + boxer_id; }
};

struct Prediction {
  double win_probability = 0.5;  // for the first-named boxer, antisymmetrized
  Vec indicators;                // 36 raw-scale values: boxer block then opponent block
};

struct EvalReport {
  double accuracy = 0.0;
  int correct = 0;
  int total = 0;
  int ties = 0;  // probability exactly 0.5, counted incorrect
  std::vector<double> probabilities;          // per edge, for boxer_a
  std::vector<std::optional<double>> pearson; // per indicator, nullopt when undefined
  int confusion[2][2] = {{0, 0}, {0, 0}};     // [actual a? 0:1][predicted a? 0:1]
};

// E(t) = sum_c E^(c) t^c over the D x C coefficient table (Horner).
Vec embed(const Mat& coeffs, double t);

Standardization compute_standardization(const std::vector<MatchEdge>& train_edges);

// Fresh untrained model over the graph's node set.
PredictorModel init_model(const BoxerGraph& graph, const TrainConfig& config,
                          PredictorMode mode);

// Antisymmetrized prediction: mean of softmax(boxer-first)[0] and
// 1 - softmax(opponent-first)[0]. Historical profiles are taken over graph
// edges dated strictly before the date corresponding to t.
Prediction predict(const BoxerGraph& graph, const PredictorModel& model,
                   const std::string& boxer_id, const std::string& opponent_id, double t);

// Full-batch multi-task training; every edge contributes both orderings.
// Returns the per-epoch total loss.
std::pair<PredictorModel, std::vector<double>> train(const BoxerGraph& graph,
                                                     const std::vector<MatchEdge>& train_edges,
                                                     const TrainConfig& config,
                                                     PredictorMode mode);

EvalReport evaluate(const PredictorModel& model, const BoxerGraph& graph,
                    const std::vector<MatchEdge>& edges);

// Centered product-moment correlation; throws when either input is constant.
double pearson_r(const std::vector<double>& x, const std::vector<double>& y);

void save_checkpoint(const PredictorModel& model, const std::string& path);
PredictorModel load_checkpoint(const std::string& path);
std::string checkpoint_to_json(const PredictorModel& model);
PredictorModel checkpoint_from_json(const std::string& text);

namespace detail {
// Input assembly shared with the strategy advisor. Offsets of the four
// blocks within the 2*(18+D) input: boxer profile, boxer embedding,
// opponent profile, opponent embedding.
Vec assemble_input(const BoxerGraph& graph, const PredictorModel& model,
                   const std::string& boxer_id, const std::string& opponent_id, double t);
Vec assemble_input_from_parts(const PredictorModel& model, const Vec18& prof_b_std,
                              bool b_missing, const Vec& emb_b, const Vec18& prof_o_std,
                              bool o_missing, const Vec& emb_o);
std::optional<Vec18> profile_before(const BoxerGraph& graph, const std::string& boxer_id,
                                    Date before);
}  // namespace detail

}  // namespace boxmind
