#include "boxmind/advisor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boxmind {

namespace {

constexpr double kBandwidthFloor = 1e-9;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double quantile(std::vector<double> sorted, double q) {
  const double pos = q * double(sorted.size() - 1);
  const std::size_t lo = std::size_t(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - double(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

GradientReport win_gradient(const PredictorModel& model, const BoxerGraph& graph,
                            const std::string& boxer_id, const std::string& opponent_id,
                            double t) {
  if (model.mode == PredictorMode::embeddings_only)
    throw std::invalid_argument(
        "win_gradient: embeddings-only models ignore indicator inputs, so the "
        "gradient is identically zero; train in unified or indicators-only mode");

  const Vec x_bo = detail::assemble_input(graph, model, boxer_id, opponent_id, t);
  const Vec x_ob = detail::assemble_input(graph, model, opponent_id, boxer_id, t);

  auto prob_grad = [&](const Vec& x, double sign) {
    Tape tape;
    Mat y = mlp_forward(model.params, model.spec, x, &tape);
    const double p = win_prob_from_logits(y(0, 0), y(1, 0));
    Mat cot = Mat::Zero(y.rows(), 1);
    cot(0, 0) = sign * p * (1.0 - p);
    cot(1, 0) = -sign * p * (1.0 - p);
    return mlp_backward(model.params, tape, cot).input;
  };

  // p = 0.5 * softmax(x_bo)[0] + 0.5 * (1 - softmax(x_ob)[0]); the boxer's
  // indicator block sits at offset 0 in x_bo and after the opponent block
  // in x_ob.
  const Mat g_bo = prob_grad(x_bo, 1.0);
  const Mat g_ob = prob_grad(x_ob, -1.0);

  GradientReport report;
  report.boxer_id = boxer_id;
  report.opponent_id = opponent_id;
  report.t = t;
  const int opp_offset = kNumIndicators + model.dim_d;
  report.grad_std = 0.5 * (g_bo.block(0, 0, kNumIndicators, 1) +
                           g_ob.block(opp_offset, 0, kNumIndicators, 1));
  report.grad_raw = report.grad_std.cwiseQuotient(model.stand.stdev);
  report.top = recommend(report, 5);
  return report;
}

std::vector<Recommendation> recommend(const GradientReport& report, int k) {
  std::vector<Recommendation> positive;
  for (int i = 0; i < kNumIndicators; ++i)
    if (report.grad_std[i] > 0) positive.push_back({i + 1, report.grad_std[i]});
  std::sort(positive.begin(), positive.end(), [](const auto& a, const auto& b) {
    if (a.gradient != b.gradient) return a.gradient > b.gradient;
    return a.index1 < b.index1;
  });
  if (int(positive.size()) > k) positive.resize(k);
  return positive;
}

double silverman_bandwidth(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("silverman_bandwidth: need >= 2 samples");
  double mean = 0;
  for (double s : samples) mean += s;
  mean /= double(n);
  double var = 0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= double(n - 1);
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  const double spread = std::min(std::sqrt(var), iqr / 1.34);
  return std::max(0.9 * spread * std::pow(double(n), -0.2), kBandwidthFloor);
}

double kde_exceed_probability(const std::vector<double>& x_samples,
                              const std::vector<double>& y_samples) {
  if (x_samples.size() < 2 || y_samples.size() < 2)
    throw std::invalid_argument("kde_exceed_probability: need >= 2 samples per pool");
  const double hx = silverman_bandwidth(x_samples);
  const double hy = silverman_bandwidth(y_samples);
  const double h = std::sqrt(hx * hx + hy * hy);
  double p = 0.0;
  for (double x : x_samples)
    for (double y : y_samples) p += normal_cdf((x - y) / h);
  return p / double(x_samples.size() * y_samples.size());
}

double kde_exceed_probability_paired(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 2)
    throw std::invalid_argument("kde_exceed_probability_paired: need >= 2 pairs");
  std::vector<double> us, vs;
  for (const auto& [u, v] : pairs) {
    us.push_back(u);
    vs.push_back(v);
  }
  const double hu = silverman_bandwidth(us);
  const double hv = silverman_bandwidth(vs);
  const double h = std::sqrt(hu * hu + hv * hv);
  double p = 0.0;
  for (const auto& [u, v] : pairs) p += normal_cdf((u - v) / h);
  return p / double(pairs.size());
}

double advantage_probability(const AdvantageQuery& query) {
  const double term1 = kde_exceed_probability(query.boxer_samples, query.level_samples);
  if (query.paired.empty()) return term1;
  return std::max(term1, kde_exceed_probability_paired(query.paired));
}

std::vector<int> advantage_labels(const std::vector<double>& probabilities) {
  std::vector<int> labels;
  labels.reserve(probabilities.size());
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("advantage_labels: probability outside [0,1]");
    labels.push_back(p > 0.5 ? 1 : 0);
  }
  return labels;
}

std::optional<double> binary_f1(const std::vector<int>& predicted,
                                const std::vector<int>& reference) {
  if (predicted.size() != reference.size())
    throw std::invalid_argument("binary_f1: length mismatch");
  int tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    tp += (predicted[i] == 1 && reference[i] == 1);
    fp += (predicted[i] == 1 && reference[i] == 0);
    fn += (predicted[i] == 0 && reference[i] == 1);
  }
  if (2 * tp + fp + fn == 0) return std::nullopt;
  return 2.0 * tp / double(2 * tp + fp + fn);
}

}  // namespace boxmind
