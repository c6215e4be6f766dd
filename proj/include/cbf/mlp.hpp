#pragma once

#include <vector>

#include "cbf/types.hpp"

namespace cbf {

enum class Activation { kTanh, kIdentity };

struct Layer {
  Mat weight;  // out x in
  Vec bias;
  Activation activation = Activation::kTanh;
};

// Dense feedforward net. Layer dimensions chain, the final layer is identity.
// Immutable in spirit: evaluation never mutates the net, only workspaces.
//
// Flat parameter layout: all weight matrices first (row-major within each),
// then all bias vectors, both in layer order. The offsets below index into
// that layout.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<Layer> layers);

  int input_dim() const { return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols()); }
  int output_dim() const { return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows()); }
  int layer_count() const { return static_cast<int>(layers_.size()); }
  const Layer& layer(int i) const { return layers_[static_cast<std::size_t>(i)]; }
  const std::vector<Layer>& layers() const { return layers_; }

  int param_count() const { return param_count_; }
  int weight_offset(int l) const { return w_off_[static_cast<std::size_t>(l)]; }
  int bias_offset(int l) const { return b_off_[static_cast<std::size_t>(l)]; }

  // mutation points for training / deserialization; shapes must be preserved
  Mat& weight(int l) { return layers_[static_cast<std::size_t>(l)].weight; }
  Vec& bias(int l) { return layers_[static_cast<std::size_t>(l)].bias; }

 private:
  std::vector<Layer> layers_;
  std::vector<int> w_off_, b_off_;
  int param_count_ = 0;
};

// tanh hidden layers of the given widths, identity output layer.
// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
Mlp make_mlp(int input_dim, const std::vector<int>& hidden, int output_dim, Rng& rng);

// Reusable evaluation buffers; one per thread in parallel loops.
struct MlpWorkspace {
  std::vector<Vec> act;    // act[0] = input, act[l+1] = output of layer l
  std::vector<Vec> pre;    // pre[l] = W_l act[l] + b_l
  std::vector<Vec> dpre;   // backprop scratch per layer
  Vec dact;                // gradient w.r.t. current activations
  void resize(const Mlp& net);
};

// Forward pass; result lands in ws.act.back().
void mlp_forward(const Mlp& net, const Vec& x, MlpWorkspace& ws);
Vec mlp_forward(const Mlp& net, const Vec& x);

// Scalar convenience for nets with output_dim() == 1.
double mlp_scalar(const Mlp& net, const Vec& x, MlpWorkspace& ws);

// Reverse pass for <upstream, output>. Requires ws to hold the forward state
// for the same (net, x). Accumulates scale * d/dparams into grad_flat (a
// buffer of param_count doubles, laid out like the flat parameter vector)
// when non-null; writes d/dx into input_grad when non-null.
void mlp_backward(const Mlp& net, MlpWorkspace& ws, const Vec& upstream, double scale,
                  double* grad_flat, Vec* input_grad);

// Gradient of <upstream, output> w.r.t. the flat parameter vector.
Vec mlp_grad_params(const Mlp& net, const Vec& x, const Vec& upstream);

// Jacobian d output / d input, shape out x in.
Mat mlp_grad_input(const Mlp& net, const Vec& x);

// Largest singular value by power iteration (relative tolerance 1e-8,
// iteration cap 500).
double spectral_norm(const Mat& a);

// Product of layer spectral norms; a Lipschitz upper bound since every
// activation has slope at most 1.
double lipschitz_upper(const Mlp& net);

// Flat parameter vector round-trip (lossless).
Vec mlp_to_paramvec(const Mlp& net);
void mlp_from_paramvec(Mlp& net, const Vec& theta);

}  // namespace cbf
