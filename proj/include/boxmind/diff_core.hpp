#pragma once

#include "boxmind/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace boxmind {

// Fully connected net: affine layers with ReLU on every hidden layer and a
// linear output layer. widths = {input, hidden..., output}.
struct MlpSpec {
  std::vector<int> widths;

  int input_width() const { return widths.front(); }
  int output_width() const { return widths.back(); }
  int num_layers() const { return int(widths.size()) - 1; }
};

void validate_spec(const MlpSpec& spec);  // throws on widths < 1 or < 2 entries

// Named tensors, iterated in name-sorted order (std::map).
using ParamSet = std::map<std::string, Mat>;
using GradSet = std::map<std::string, Mat>;

// Layer i uses keys "Li/W" (out x in) and "Li/b" (out x 1).
std::string weight_key(int layer);
std::string bias_key(int layer);

// Seeded uniform +-sqrt(6/(fan_in+fan_out)) weights, zero biases.
ParamSet init_mlp_params(const MlpSpec& spec, std::uint64_t seed);

// Forward record: inputs plus every layer's pre- and post-activation,
// enough to replay the pass and to run reverse mode once.
struct Tape {
  MlpSpec spec;
  Mat input;               // in x S (samples as columns)
  std::vector<Mat> post;   // post[i] = activation after layer i; post.back() is the output
};

// Batched forward; columns are independent samples.
Mat mlp_forward(const ParamSet& params, const MlpSpec& spec, const Mat& input,
                Tape* tape = nullptr);

// Re-evaluates the recorded forward pass from the tape's input.
Mat replay(const ParamSet& params, const Tape& tape);

struct Gradients {
  GradSet params;
  Mat input;  // d(scalar)/d(input), same shape as the forward input
};

// Reverse mode from an output cotangent (same shape as the output).
Gradients mlp_backward(const ParamSet& params, const Tape& tape, const Mat& output_grad);

// Reverse mode for a single scalar output component of a one-sample tape.
Gradients mlp_backward_select(const ParamSet& params, const Tape& tape, int output_index);

struct AdamConfig {
  double lr = 0.02;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

struct AdamState {
  std::map<std::string, Mat> m;  // first moments
  std::map<std::string, Mat> v;  // second moments
  long step = 0;
};

// Decay is folded into the gradient (g += wd * p) before the moment updates;
// bias-corrected moments drive the step. Throws on non-finite gradients.
void adam_step(ParamSet& params, const GradSet& grads, AdamState& state,
               const AdamConfig& config);

// Max relative error between reverse-mode and central finite-difference
// gradients (h = 1e-5) of softmax(out[0], out[1])[0], over all parameters
// and the input, for a seeded random instance of `spec`.
double grad_check(const MlpSpec& spec, std::uint64_t seed);

// p = exp(z0) / (exp(z0) + exp(z1)), numerically stable.
double win_prob_from_logits(double z0, double z1);

}  // namespace boxmind
