#include "boxmind/predictor.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace boxmind {

namespace {
using json = nlohmann::json;

constexpr double kStdFloor = 1e-6;

struct Sample {
  std::string first_id, second_id;
  double t = 0.0;
  Vec18 prof_first = Vec18::Zero();   // standardized, zero when missing
  Vec18 prof_second = Vec18::Zero();
  bool first_missing = true, second_missing = true;
  int label = 0;                      // 0 = first-named boxer wins
  bool footage = false;
  Vec targets = Vec::Zero(36);        // standardized, valid iff footage
};

Vec softmax2(double z0, double z1) {
  const double p0 = win_prob_from_logits(z0, z1);
  Vec p(2);
  p << p0, 1.0 - p0;
  return p;
}

json mat_to_json(const Mat& m) {
  json data = json::array();
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r) data.push_back(m(r, c));
  return json{{"shape", {m.rows(), m.cols()}}, {"data", std::move(data)}};
}

Mat mat_from_json(const json& j) {
  const auto& shape = j.at("shape");
  Mat m(shape.at(0).get<int>(), shape.at(1).get<int>());
  const auto& data = j.at("data");
  if (int(data.size()) != m.size()) throw std::runtime_error("checkpoint: tensor size mismatch");
  int i = 0;
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r) m(r, c) = data.at(i++).get<double>();
  return m;
}

}  // namespace

const std::string& to_string(PredictorMode mode) {
  static const std::string names[] = {"unified", "indicators_only", "embeddings_only"};
  return names[int(mode)];
}

PredictorMode predictor_mode_from_string(const std::string& name) {
  if (name == "unified") return PredictorMode::unified;
  if (name == "indicators_only" || name == "indicators-only") return PredictorMode::indicators_only;
  if (name == "embeddings_only" || name == "embeddings-only") return PredictorMode::embeddings_only;
  throw std::invalid_argument("unknown predictor mode \"" + name + "\"");
}

Vec embed(const Mat& coeffs, double t) {
  Vec result = coeffs.col(coeffs.cols() - 1);
  for (int c = int(coeffs.cols()) - 2; c >= 0; --c) result = result * t + coeffs.col(c);
  return result;
}

Standardization compute_standardization(const std::vector<MatchEdge>& train_edges) {
  Vec18 sum = Vec18::Zero(), sumsq = Vec18::Zero();
  int n = 0;
  for (const auto& e : train_edges) {
    for (const auto* ind : {e.ind_a ? &*e.ind_a : nullptr, e.ind_b ? &*e.ind_b : nullptr}) {
      if (!ind) continue;
      sum += *ind;
      sumsq += ind->cwiseProduct(*ind);
      ++n;
    }
  }
  Standardization s;
  if (n > 0) {
    s.mean = sum / double(n);
    Vec18 var = sumsq / double(n) - s.mean.cwiseProduct(s.mean);
    s.stdev = var.cwiseMax(0.0).cwiseSqrt().cwiseMax(kStdFloor);
  }
  return s;
}

namespace detail {

std::optional<Vec18> profile_before(const BoxerGraph& graph, const std::string& boxer_id,
                                    Date before) {
  auto hist = footage_history(graph.edges, boxer_id);
  return historical_profile(hist, before);
}

Vec assemble_input_from_parts(const PredictorModel& model, const Vec18& prof_b_std,
                              bool b_missing, const Vec& emb_b, const Vec18& prof_o_std,
                              bool o_missing, const Vec& emb_o) {
  const int d = model.dim_d;
  const bool use_ind = model.mode != PredictorMode::embeddings_only;
  const bool use_emb = model.mode != PredictorMode::indicators_only;
  Vec x = Vec::Zero(2 * (kNumIndicators + d));
  if (use_ind) {
    if (!b_missing) x.segment(0, kNumIndicators) = prof_b_std;
    if (!o_missing) x.segment(kNumIndicators + d, kNumIndicators) = prof_o_std;
  }
  if (use_emb) {
    x.segment(kNumIndicators, d) = emb_b;
    x.segment(2 * kNumIndicators + d, d) = emb_o;
  }
  return x;
}

Vec assemble_input(const BoxerGraph& graph, const PredictorModel& model,
                   const std::string& boxer_id, const std::string& opponent_id, double t) {
  if (!graph.nodes.count(boxer_id)) throw std::invalid_argument("unknown boxer \"" + boxer_id + "\"");
  if (!graph.nodes.count(opponent_id))
    throw std::invalid_argument("unknown boxer \"" + opponent_id + "\"");
  const Date cutoff = graph.denormalize_time(t);
  auto prof_b = profile_before(graph, boxer_id, cutoff);
  auto prof_o = profile_before(graph, opponent_id, cutoff);
  const Mat& eb = model.params.at(PredictorModel::embedding_key(boxer_id));
  const Mat& eo = model.params.at(PredictorModel::embedding_key(opponent_id));
  return assemble_input_from_parts(model, prof_b ? model.stand.apply(*prof_b) : Vec18::Zero(),
                                   !prof_b, embed(eb, t),
                                   prof_o ? model.stand.apply(*prof_o) : Vec18::Zero(),
                                   !prof_o, embed(eo, t));
}

}  // namespace detail

PredictorModel init_model(const BoxerGraph& graph, const TrainConfig& config,
                          PredictorMode mode) {
  PredictorModel m;
  m.dim_d = graph.dim_d;
  m.order_c = graph.order_c;
  m.mode = mode;
  m.seed = config.seed;
  m.spec.widths.push_back(2 * (kNumIndicators + graph.dim_d));
  for (int h : config.hidden) m.spec.widths.push_back(h);
  m.spec.widths.push_back(2 + 2 * kNumIndicators);
  validate_spec(m.spec);
  m.params = init_mlp_params(m.spec, config.seed);
  for (const auto& [id, node] : graph.nodes)
    m.params[PredictorModel::embedding_key(id)] = node.embedding_coeffs;
  return m;
}

Prediction predict(const BoxerGraph& graph, const PredictorModel& model,
                   const std::string& boxer_id, const std::string& opponent_id, double t) {
  const Vec x_bo = detail::assemble_input(graph, model, boxer_id, opponent_id, t);
  const Vec x_ob = detail::assemble_input(graph, model, opponent_id, boxer_id, t);
  const Mat y_bo = mlp_forward(model.params, model.spec, x_bo);
  const Mat y_ob = mlp_forward(model.params, model.spec, x_ob);
  const double p_bo = win_prob_from_logits(y_bo(0, 0), y_bo(1, 0));
  const double p_ob = win_prob_from_logits(y_ob(0, 0), y_ob(1, 0));

  Prediction out;
  out.win_probability = 0.5 * p_bo + 0.5 * (1.0 - p_ob);
  out.indicators = Vec(2 * kNumIndicators);
  Vec18 first_std = y_bo.block(2, 0, kNumIndicators, 1);
  Vec18 second_std = y_bo.block(2 + kNumIndicators, 0, kNumIndicators, 1);
  out.indicators.segment(0, kNumIndicators) = model.stand.invert(first_std);
  out.indicators.segment(kNumIndicators, kNumIndicators) = model.stand.invert(second_std);
  return out;
}

std::pair<PredictorModel, std::vector<double>> train(const BoxerGraph& graph,
                                                     const std::vector<MatchEdge>& train_edges,
                                                     const TrainConfig& config,
                                                     PredictorMode mode) {
  if (train_edges.empty()) throw std::invalid_argument("train: empty split");
  if (!(config.lr > 0) || config.epochs < 1 || config.alpha < 0 || !(config.beta > 0))
    throw std::invalid_argument("train: invalid config");

  PredictorModel model = init_model(graph, config, mode);
  model.stand = compute_standardization(train_edges);

  // Historical profiles use only strictly earlier footage within the split.
  std::vector<Sample> samples;
  samples.reserve(2 * train_edges.size());
  for (const auto& e : train_edges) {
    auto hist_a = historical_profile(footage_history(train_edges, e.boxer_a), e.date);
    auto hist_b = historical_profile(footage_history(train_edges, e.boxer_b), e.date);
    for (int ordering = 0; ordering < 2; ++ordering) {
      Sample s;
      const bool a_first = (ordering == 0);
      s.first_id = a_first ? e.boxer_a : e.boxer_b;
      s.second_id = a_first ? e.boxer_b : e.boxer_a;
      s.t = e.t;
      const auto& hist_first = a_first ? hist_a : hist_b;
      const auto& hist_second = a_first ? hist_b : hist_a;
      if (hist_first) { s.prof_first = model.stand.apply(*hist_first); s.first_missing = false; }
      if (hist_second) { s.prof_second = model.stand.apply(*hist_second); s.second_missing = false; }
      s.label = (e.winner_id() == s.first_id) ? 0 : 1;
      s.footage = e.footage;
      if (e.footage) {
        const Vec18& ind_first = a_first ? *e.ind_a : *e.ind_b;
        const Vec18& ind_second = a_first ? *e.ind_b : *e.ind_a;
        s.targets.segment(0, kNumIndicators) = model.stand.apply(ind_first);
        s.targets.segment(kNumIndicators, kNumIndicators) = model.stand.apply(ind_second);
      }
      samples.push_back(std::move(s));
    }
  }

  const int n_samples = int(samples.size());
  int n_footage = 0;
  for (const auto& s : samples) n_footage += s.footage;

  const int d = model.dim_d;
  const bool use_emb = mode != PredictorMode::indicators_only;

  // Profile blocks of the batch are fixed; embedding blocks are refilled
  // every epoch from the current coefficients.
  Mat batch = Mat::Zero(model.spec.input_width(), n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const auto& s = samples[i];
    if (mode != PredictorMode::embeddings_only) {
      if (!s.first_missing) batch.block(0, i, kNumIndicators, 1) = s.prof_first;
      if (!s.second_missing)
        batch.block(kNumIndicators + d, i, kNumIndicators, 1) = s.prof_second;
    }
  }

  AdamState adam;
  AdamConfig adam_cfg;
  adam_cfg.lr = config.lr;
  adam_cfg.weight_decay = config.weight_decay;

  std::vector<double> loss_curve;
  loss_curve.reserve(config.epochs);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (use_emb) {
      for (int i = 0; i < n_samples; ++i) {
        const auto& s = samples[i];
        batch.block(kNumIndicators, i, d, 1) =
            embed(model.params.at(PredictorModel::embedding_key(s.first_id)), s.t);
        batch.block(2 * kNumIndicators + d, i, d, 1) =
            embed(model.params.at(PredictorModel::embedding_key(s.second_id)), s.t);
      }
    }

    Tape tape;
    Mat y = mlp_forward(model.params, model.spec, batch, &tape);

    Mat cot = Mat::Zero(y.rows(), y.cols());
    double loss = 0.0;
    for (int i = 0; i < n_samples; ++i) {
      const auto& s = samples[i];
      const Vec p = softmax2(y(0, i), y(1, i));
      loss += config.beta * -std::log(std::max(p[s.label], 1e-300)) / n_samples;
      cot(0, i) = config.beta * (p[0] - (s.label == 0 ? 1.0 : 0.0)) / n_samples;
      cot(1, i) = config.beta * (p[1] - (s.label == 1 ? 1.0 : 0.0)) / n_samples;
      if (s.footage && config.alpha > 0 && n_footage > 0) {
        const double scale = config.alpha / double(2 * kNumIndicators * n_footage);
        for (int k = 0; k < 2 * kNumIndicators; ++k) {
          const double diff = y(2 + k, i) - s.targets[k];
          loss += scale * diff * diff;
          cot(2 + k, i) = 2.0 * scale * diff;
        }
      }
    }
    if (!std::isfinite(loss))
      throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch));
    loss_curve.push_back(loss);

    Gradients g = mlp_backward(model.params, tape, cot);
    if (use_emb) {
      for (int i = 0; i < n_samples; ++i) {
        const auto& s = samples[i];
        double tc = 1.0;
        for (int c = 0; c < model.order_c; ++c) {
          auto add = [&](const std::string& id, int offset) {
            const std::string key = PredictorModel::embedding_key(id);
            auto it = g.params.try_emplace(key, Mat::Zero(d, model.order_c)).first;
            it->second.col(c) += tc * g.input.block(offset, i, d, 1);
          };
          add(s.first_id, kNumIndicators);
          add(s.second_id, 2 * kNumIndicators + d);
          tc *= s.t;
        }
      }
    }
    adam_step(model.params, g.params, adam, adam_cfg);
    model.epoch = epoch + 1;
  }
  return {std::move(model), std::move(loss_curve)};
}

EvalReport evaluate(const PredictorModel& model, const BoxerGraph& graph,
                    const std::vector<MatchEdge>& edges) {
  if (edges.empty()) throw std::invalid_argument("evaluate: empty edge list");
  EvalReport report;
  std::vector<std::vector<double>> pred_by_ind(kNumIndicators), obs_by_ind(kNumIndicators);

  for (const auto& e : edges) {
    const Prediction p = predict(graph, model, e.boxer_a, e.boxer_b, e.t);
    report.probabilities.push_back(p.win_probability);
    const int actual = (e.winner == 'a') ? 0 : 1;
    int predicted;
    if (p.win_probability > 0.5) {
      predicted = 0;
    } else if (p.win_probability < 0.5) {
      predicted = 1;
    } else {
      ++report.ties;             // exact tie counts as incorrect
      predicted = 1 - actual;
    }
    report.confusion[actual][predicted]++;
    report.correct += (predicted == actual);
    ++report.total;

    if (e.footage) {
      for (int k = 0; k < kNumIndicators; ++k) {
        pred_by_ind[k].push_back(p.indicators[k]);
        obs_by_ind[k].push_back((*e.ind_a)[k]);
        pred_by_ind[k].push_back(p.indicators[kNumIndicators + k]);
        obs_by_ind[k].push_back((*e.ind_b)[k]);
      }
    }
  }
  report.accuracy = double(report.correct) / double(report.total);
  report.pearson.resize(kNumIndicators);
  for (int k = 0; k < kNumIndicators; ++k) {
    try {
      if (pred_by_ind[k].size() >= 2)
        report.pearson[k] = pearson_r(pred_by_ind[k], obs_by_ind[k]);
    } catch (const std::invalid_argument&) {
      // constant channel, correlation undefined
    }
  }
  return report;
}

double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson_r: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("pearson_r: need at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) throw std::invalid_argument("pearson_r: undefined correlation");
  return sxy / std::sqrt(sxx * syy);
}

std::string checkpoint_to_json(const PredictorModel& model) {
  json doc;
  doc["arch"] = json{{"widths", model.spec.widths}, {"activation", "relu"}};
  json params;
  for (const auto& [name, tensor] : model.params) params[name] = mat_to_json(tensor);
  doc["params"] = std::move(params);
  doc["D"] = model.dim_d;
  doc["C"] = model.order_c;
  doc["mode"] = to_string(model.mode);
  doc["seed"] = model.seed;
  doc["epoch"] = model.epoch;
  json means = json::array(), stds = json::array();
  for (int k = 0; k < kNumIndicators; ++k) {
    means.push_back(model.stand.mean[k]);
    stds.push_back(model.stand.stdev[k]);
  }
  doc["standardization"] = json{{"means", std::move(means)}, {"stds", std::move(stds)}};
  return doc.dump(2) + "\n";
}

PredictorModel checkpoint_from_json(const std::string& text) {
  json doc = json::parse(text);
  PredictorModel model;
  model.spec.widths = doc.at("arch").at("widths").get<std::vector<int>>();
  validate_spec(model.spec);
  for (const auto& [name, jt] : doc.at("params").items()) model.params[name] = mat_from_json(jt);
  model.dim_d = doc.at("D").get<int>();
  model.order_c = doc.at("C").get<int>();
  model.mode = predictor_mode_from_string(doc.at("mode").get<std::string>());
  model.seed = doc.at("seed").get<std::uint64_t>();
  model.epoch = doc.at("epoch").get<int>();
  const auto& st = doc.at("standardization");
  for (int k = 0; k < kNumIndicators; ++k) {
    model.stand.mean[k] = st.at("means").at(k).get<double>();
    model.stand.stdev[k] = st.at("stds").at(k).get<double>();
  }
  return model;
}

void save_checkpoint(const PredictorModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << checkpoint_to_json(model);
}

PredictorModel load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_json(buf.str());
}

}  // namespace boxmind
