#include "boxmind/diff_core.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace boxmind {

void validate_spec(const MlpSpec& spec) {
  if (spec.widths.size() < 2)
    throw std::invalid_argument("architecture needs at least input and output widths");
  for (int w : spec.widths)
    if (w < 1) throw std::invalid_argument("layer widths must be >= 1");
}

std::string weight_key(int layer) { return "L" + std::to_string(layer) + "/W"; }
std::string bias_key(int layer) { return "L" + std::to_string(layer) + "/b"; }

ParamSet init_mlp_params(const MlpSpec& spec, std::uint64_t seed) {
  validate_spec(spec);
  std::mt19937_64 rng(seed);
  ParamSet params;
  for (int i = 0; i < spec.num_layers(); ++i) {
    const int fan_in = spec.widths[i];
    const int fan_out = spec.widths[i + 1];
    const double bound = std::sqrt(6.0 / double(fan_in + fan_out));
    std::uniform_real_distribution<double> u(-bound, bound);
    Mat w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c) w(r, c) = u(rng);
    params[weight_key(i)] = std::move(w);
    params[bias_key(i)] = Mat::Zero(fan_out, 1);
  }
  return params;
}

Mat mlp_forward(const ParamSet& params, const MlpSpec& spec, const Mat& input, Tape* tape) {
  validate_spec(spec);
  if (input.rows() != spec.input_width())
    throw std::invalid_argument("input width mismatch: got " + std::to_string(input.rows()) +
                                ", expected " + std::to_string(spec.input_width()));
  if (tape) {
    tape->spec = spec;
    tape->input = input;
    tape->post.clear();
  }
  Mat x = input;
  for (int i = 0; i < spec.num_layers(); ++i) {
    const Mat& w = params.at(weight_key(i));
    const Mat& b = params.at(bias_key(i));
    Mat z = (w * x).colwise() + Eigen::VectorXd(b.col(0));
    if (i + 1 < spec.num_layers()) z = z.cwiseMax(0.0);  // ReLU on hidden layers
    if (tape) tape->post.push_back(z);
    x = std::move(z);
  }
  return x;
}

Mat replay(const ParamSet& params, const Tape& tape) {
  return mlp_forward(params, tape.spec, tape.input);
}

Gradients mlp_backward(const ParamSet& params, const Tape& tape, const Mat& output_grad) {
  const MlpSpec& spec = tape.spec;
  if (int(tape.post.size()) != spec.num_layers())
    throw std::invalid_argument("tape does not match its architecture");
  if (output_grad.rows() != spec.output_width() || output_grad.cols() != tape.input.cols())
    throw std::invalid_argument("output cotangent shape mismatch");

  Gradients g;
  Mat delta = output_grad;  // d(scalar)/d(post-activation of current layer)
  for (int i = spec.num_layers() - 1; i >= 0; --i) {
    const Mat& layer_in = (i == 0) ? tape.input : tape.post[i - 1];
    if (i + 1 < spec.num_layers()) {
      // ReLU: zero where the recorded post-activation is zero.
      delta = delta.cwiseProduct((tape.post[i].array() > 0.0).cast<double>().matrix());
    }
    g.params[weight_key(i)] = delta * layer_in.transpose();
    g.params[bias_key(i)] = delta.rowwise().sum();
    delta = params.at(weight_key(i)).transpose() * delta;
  }
  g.input = std::move(delta);
  return g;
}

Gradients mlp_backward_select(const ParamSet& params, const Tape& tape, int output_index) {
  if (tape.input.cols() != 1)
    throw std::invalid_argument("output selection requires a single-sample tape");
  if (output_index < 0 || output_index >= tape.spec.output_width())
    throw std::out_of_range("output selector out of range");
  Mat cot = Mat::Zero(tape.spec.output_width(), 1);
  cot(output_index, 0) = 1.0;
  return mlp_backward(params, tape, cot);
}

void adam_step(ParamSet& params, const GradSet& grads, AdamState& state,
               const AdamConfig& config) {
  if (state.step == 0) {
    for (const auto& [name, p] : params) {
      state.m[name] = Mat::Zero(p.rows(), p.cols());
      state.v[name] = Mat::Zero(p.rows(), p.cols());
    }
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(config.beta1, double(state.step));
  const double bc2 = 1.0 - std::pow(config.beta2, double(state.step));

  for (auto& [name, p] : params) {
    auto git = grads.find(name);
    if (git == grads.end()) continue;  // untouched parameter (e.g., masked embeddings)
    if (!git->second.allFinite())
      throw std::runtime_error("non-finite gradient for \"" + name + "\" at step " +
                               std::to_string(state.step));
    Mat g = git->second + config.weight_decay * p;
    Mat& m = state.m.at(name);
    Mat& v = state.v.at(name);
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g.cwiseProduct(g);
    const Mat m_hat = m / bc1;
    const Mat v_hat = v / bc2;
    p.array() -= config.lr * m_hat.array() / (v_hat.array().sqrt() + config.eps);
  }
}

double win_prob_from_logits(double z0, double z1) {
  const double m = std::max(z0, z1);
  const double e0 = std::exp(z0 - m);
  const double e1 = std::exp(z1 - m);
  return e0 / (e0 + e1);
}

double grad_check(const MlpSpec& spec, std::uint64_t seed) {
  validate_spec(spec);
  if (spec.output_width() < 2)
    throw std::invalid_argument("grad_check needs at least two output logits");

  // Central differences step across ReLU kinks when a pre-activation sits
  // within O(h) of zero, so redraw until every hidden unit clears a margin.
  ParamSet params;
  Mat x(spec.input_width(), 1);
  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt == 100)
      throw std::runtime_error("grad_check: no kink-free instance found");
    params = init_mlp_params(spec, seed + attempt * 0x3779u);
    std::mt19937_64 rng((seed + attempt) ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int r = 0; r < x.rows(); ++r) x(r, 0) = u(rng);
    double min_abs_pre = 1.0;
    Mat act = x;
    for (int layer = 0; layer + 1 < spec.num_layers(); ++layer) {
      Mat pre = params.at(weight_key(layer)) * act + params.at(bias_key(layer));
      min_abs_pre = std::min(min_abs_pre, pre.cwiseAbs().minCoeff());
      act = pre.cwiseMax(0.0);
    }
    if (min_abs_pre > 1e-3) break;
  }

  auto scalar = [&](const ParamSet& p, const Mat& in) {
    Mat out = mlp_forward(p, spec, in);
    return win_prob_from_logits(out(0, 0), out(1, 0));
  };

  // Reverse mode: chain the softmax selection into the output cotangent.
  Tape tape;
  Mat out = mlp_forward(params, spec, x, &tape);
  const double p0 = win_prob_from_logits(out(0, 0), out(1, 0));
  Mat cot = Mat::Zero(spec.output_width(), 1);
  cot(0, 0) = p0 * (1.0 - p0);
  cot(1, 0) = -p0 * (1.0 - p0);
  Gradients ad = mlp_backward(params, tape, cot);

  const double h = 1e-5;
  double max_rel = 0.0;
  auto compare = [&](double g_ad, double g_fd) {
    // The denominator is floored so that roundoff in the finite-difference
    // quotient (~1e-11) cannot dominate on near-zero gradients.
    const double rel = std::abs(g_ad - g_fd) / std::max(std::abs(g_ad) + std::abs(g_fd), 1e-6);
    max_rel = std::max(max_rel, rel);
  };

  for (auto& [name, tensor] : params) {
    for (int r = 0; r < tensor.rows(); ++r) {
      for (int c = 0; c < tensor.cols(); ++c) {
        ParamSet pp = params;
        pp.at(name)(r, c) += h;
        const double f_plus = scalar(pp, x);
        pp.at(name)(r, c) -= 2 * h;
        const double f_minus = scalar(pp, x);
        compare(ad.params.at(name)(r, c), (f_plus - f_minus) / (2 * h));
      }
    }
  }
  for (int r = 0; r < x.rows(); ++r) {
    Mat xp = x;
    xp(r, 0) += h;
    const double f_plus = scalar(params, xp);
    xp(r, 0) -= 2 * h;
    const double f_minus = scalar(params, xp);
    compare(ad.input(r, 0), (f_plus - f_minus) / (2 * h));
  }
  return max_rel;
}

}  // namespace boxmind
