#include "cbf/mlp.hpp"

#include <cmath>

namespace cbf {

namespace {

using RowMajorMap =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstRowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

}  // namespace

Mlp::Mlp(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ConfigError("mlp: no layers");
  int weights = 0, biases = 0;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    if (layer.weight.rows() != layer.bias.size()) {
      throw ConfigError("mlp: bias size does not match weight rows");
    }
    if (l > 0 && layers_[l - 1].weight.rows() != layer.weight.cols()) {
      throw ConfigError("mlp: consecutive layer dimensions do not chain");
    }
    weights += static_cast<int>(layer.weight.size());
    biases += static_cast<int>(layer.bias.size());
  }
  if (layers_.back().activation != Activation::kIdentity) {
    throw ConfigError("mlp: final layer must be identity");
  }
  w_off_.resize(layers_.size());
  b_off_.resize(layers_.size());
  int w = 0, b = weights;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    w_off_[l] = w;
    b_off_[l] = b;
    w += static_cast<int>(layers_[l].weight.size());
    b += static_cast<int>(layers_[l].bias.size());
  }
  param_count_ = weights + biases;
}

Mlp make_mlp(int input_dim, const std::vector<int>& hidden, int output_dim, Rng& rng) {
  if (input_dim < 1 || output_dim < 1) throw ConfigError("mlp: bad dimensions");
  std::vector<int> dims;
  dims.push_back(input_dim);
  for (int h : hidden) {
    if (h < 1) throw ConfigError("mlp: bad hidden width");
    dims.push_back(h);
  }
  dims.push_back(output_dim);

  std::vector<Layer> layers;
  layers.reserve(dims.size() - 1);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Layer layer;
    const int rows = dims[l + 1], cols = dims[l];
    const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
    layer.weight.resize(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) layer.weight(r, c) = rng.uniform(-bound, bound);
    }
    layer.bias = Vec::Zero(rows);
    layer.activation =
        (l + 2 == dims.size()) ? Activation::kIdentity : Activation::kTanh;
    layers.push_back(std::move(layer));
  }
  return Mlp(std::move(layers));
}

void MlpWorkspace::resize(const Mlp& net) {
  const int n = net.layer_count();
  act.resize(static_cast<std::size_t>(n) + 1);
  pre.resize(static_cast<std::size_t>(n));
  dpre.resize(static_cast<std::size_t>(n));
  act[0].resize(net.input_dim());
  for (int l = 0; l < n; ++l) {
    const int rows = static_cast<int>(net.layer(l).weight.rows());
    pre[static_cast<std::size_t>(l)].resize(rows);
    dpre[static_cast<std::size_t>(l)].resize(rows);
    act[static_cast<std::size_t>(l) + 1].resize(rows);
  }
  dact.resize(net.input_dim());
}

void mlp_forward(const Mlp& net, const Vec& x, MlpWorkspace& ws) {
  if (x.size() != net.input_dim()) throw ConfigError("mlp: input dimension mismatch");
  if (ws.act.size() != static_cast<std::size_t>(net.layer_count()) + 1) ws.resize(net);
  ws.act[0] = x;
  for (int l = 0; l < net.layer_count(); ++l) {
    const Layer& layer = net.layer(l);
    Vec& pre = ws.pre[static_cast<std::size_t>(l)];
    Vec& out = ws.act[static_cast<std::size_t>(l) + 1];
    pre.noalias() = layer.weight * ws.act[static_cast<std::size_t>(l)];
    pre += layer.bias;
    if (layer.activation == Activation::kTanh) {
      out = pre.array().tanh();
    } else {
      out = pre;
    }
  }
}

Vec mlp_forward(const Mlp& net, const Vec& x) {
  MlpWorkspace ws;
  mlp_forward(net, x, ws);
  return ws.act.back();
}

double mlp_scalar(const Mlp& net, const Vec& x, MlpWorkspace& ws) {
  mlp_forward(net, x, ws);
  return ws.act.back()[0];
}

void mlp_backward(const Mlp& net, MlpWorkspace& ws, const Vec& upstream, double scale,
                  double* grad_flat, Vec* input_grad) {
  const int n = net.layer_count();
  // ws.dpre[l] holds d/d act[l+1] on entry to iteration l and is turned into
  // d/d pre[l] in place.
  ws.dpre[static_cast<std::size_t>(n - 1)] = upstream;
  for (int l = n - 1; l >= 0; --l) {
    const Layer& layer = net.layer(l);
    Vec& dpre = ws.dpre[static_cast<std::size_t>(l)];
    if (layer.activation == Activation::kTanh) {
      const Vec& out = ws.act[static_cast<std::size_t>(l) + 1];
      dpre.array() *= 1.0 - out.array().square();
    }
    if (grad_flat != nullptr) {
      RowMajorMap wgrad(grad_flat + net.weight_offset(l), layer.weight.rows(),
                        layer.weight.cols());
      wgrad.noalias() += (scale * dpre) * ws.act[static_cast<std::size_t>(l)].transpose();
      Eigen::Map<Vec>(grad_flat + net.bias_offset(l), layer.bias.size()) += scale * dpre;
    }
    if (l > 0) {
      ws.dpre[static_cast<std::size_t>(l - 1)].noalias() = layer.weight.transpose() * dpre;
    } else if (input_grad != nullptr) {
      *input_grad = layer.weight.transpose() * dpre;
    }
  }
}

Vec mlp_grad_params(const Mlp& net, const Vec& x, const Vec& upstream) {
  MlpWorkspace ws;
  mlp_forward(net, x, ws);
  Vec grad = Vec::Zero(net.param_count());
  mlp_backward(net, ws, upstream, 1.0, grad.data(), nullptr);
  return grad;
}

Mat mlp_grad_input(const Mlp& net, const Vec& x) {
  MlpWorkspace ws;
  mlp_forward(net, x, ws);
  Mat jac(net.output_dim(), net.input_dim());
  Vec upstream = Vec::Zero(net.output_dim());
  Vec row(net.input_dim());
  for (int i = 0; i < net.output_dim(); ++i) {
    upstream.setZero();
    upstream[i] = 1.0;
    mlp_backward(net, ws, upstream, 1.0, nullptr, &row);
    jac.row(i) = row;
  }
  return jac;
}

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  const int n = static_cast<int>(a.cols());
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * static_cast<double>(i);
  v /= v.norm();
  double sigma = 0.0;
  Vec av(a.rows()), atav(n);
  for (int it = 0; it < 500; ++it) {
    av.noalias() = a * v;
    const double next = av.norm();
    if (next == 0.0) return 0.0;
    const bool converged = it > 0 && std::abs(next - sigma) <= 1e-8 * next;
    sigma = next;
    if (converged) break;
    atav.noalias() = a.transpose() * av;
    const double norm = atav.norm();
    if (norm == 0.0) break;
    v = atav / norm;
  }
  return sigma;
}

double lipschitz_upper(const Mlp& net) {
  double bound = 1.0;
  for (const Layer& layer : net.layers()) bound *= spectral_norm(layer.weight);
  return bound;
}

Vec mlp_to_paramvec(const Mlp& net) {
  Vec theta(net.param_count());
  for (int l = 0; l < net.layer_count(); ++l) {
    const Layer& layer = net.layer(l);
    RowMajorMap(theta.data() + net.weight_offset(l), layer.weight.rows(),
                layer.weight.cols()) = layer.weight;
    theta.segment(net.bias_offset(l), layer.bias.size()) = layer.bias;
  }
  return theta;
}

void mlp_from_paramvec(Mlp& net, const Vec& theta) {
  if (theta.size() != net.param_count()) throw ConfigError("mlp: parameter vector size mismatch");
  for (int l = 0; l < net.layer_count(); ++l) {
    Mat& w = net.weight(l);
    w = ConstRowMajorMap(theta.data() + net.weight_offset(l), w.rows(), w.cols());
    net.bias(l) = theta.segment(net.bias_offset(l), net.bias(l).size());
  }
}

}  // namespace cbf
