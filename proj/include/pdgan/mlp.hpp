#pragma once

// Dense feed-forward nets, batched row-wise, with hand-rolled backprop.
// Kept deliberately small: forward caches activations only, and layer
// derivatives are reconstructed from those (relu and sigmoid derivatives
// are functions of the layer output).

#include <Eigen/Core>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdgan {

enum class Activation { linear, relu, sigmoid };

inline Activation activation_from_name(const std::string& name) {
  if (name == "linear") return Activation::linear;
  if (name == "relu") return Activation::relu;
  if (name == "sigmoid") return Activation::sigmoid;
  throw std::invalid_argument("unknown activation: " + name);
}

inline const char* activation_name(Activation a) {
  switch (a) {
    case Activation::linear: return "linear";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
  }
  return "?";
}

inline double sigmoid(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  double e = std::exp(a);
  return e / (1.0 + e);
}

struct Layer {
  Eigen::MatrixXd w;  // fan_in x fan_out
  Eigen::VectorXd b;
  Activation act = Activation::linear;
};

struct Mlp {
  std::vector<Layer> layers;

  Eigen::Index in_dim() const { return layers.front().w.rows(); }
  Eigen::Index out_dim() const { return layers.back().w.cols(); }
};

// widths = {in, h1, ..., out}; acts has one entry per layer.
inline Mlp make_mlp(const std::vector<Eigen::Index>& widths,
                    const std::vector<Activation>& acts) {
  if (widths.size() < 2 || acts.size() != widths.size() - 1)
    throw std::invalid_argument("make_mlp: widths/activations mismatch");
  Mlp net;
  for (size_t l = 0; l + 1 < widths.size(); ++l) {
    Layer layer;
    layer.w = Eigen::MatrixXd::Zero(widths[l], widths[l + 1]);
    layer.b = Eigen::VectorXd::Zero(widths[l + 1]);
    layer.act = acts[l];
    net.layers.push_back(std::move(layer));
  }
  return net;
}

// Uniform(-r, r) with r = sqrt(6 / (fan_in + fan_out)); biases zero.
// Weight draw order is fixed (row-major) so runs are reproducible.
template <class Rng>
void init_xavier(Mlp& net, Rng& rng) {
  for (auto& layer : net.layers) {
    const double r =
        std::sqrt(6.0 / static_cast<double>(layer.w.rows() + layer.w.cols()));
    std::uniform_real_distribution<double> u(-r, r);
    for (Eigen::Index i = 0; i < layer.w.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.w.cols(); ++j) layer.w(i, j) = u(rng);
    layer.b.setZero();
  }
}

inline Eigen::MatrixXd apply_activation(Activation act, Eigen::MatrixXd a) {
  switch (act) {
    case Activation::linear: return a;
    case Activation::relu: return a.cwiseMax(0.0);
    case Activation::sigmoid:
      return a.unaryExpr([](double v) { return sigmoid(v); });
  }
  throw std::logic_error("apply_activation: bad activation");
}

// Derivative expressed through the activation value y = act(a).
inline Eigen::MatrixXd activation_deriv_from_value(Activation act,
                                                   const Eigen::MatrixXd& y) {
  switch (act) {
    case Activation::linear: return Eigen::MatrixXd::Ones(y.rows(), y.cols());
    case Activation::relu:
      return (y.array() > 0.0).cast<double>().matrix();
    case Activation::sigmoid:
      return (y.array() * (1.0 - y.array())).matrix();
  }
  throw std::logic_error("activation_deriv_from_value: bad activation");
}

struct ForwardCache {
  // acts[0] is the input batch, acts[l+1] the output of layer l.
  std::vector<Eigen::MatrixXd> acts;
  const Eigen::MatrixXd& output() const { return acts.back(); }
};

inline ForwardCache forward_cached(const Mlp& net, const Eigen::MatrixXd& x) {
  if (x.cols() != net.in_dim())
    throw std::invalid_argument("forward: input dimension mismatch");
  ForwardCache cache;
  cache.acts.reserve(net.layers.size() + 1);
  cache.acts.push_back(x);
  for (const auto& layer : net.layers) {
    Eigen::MatrixXd a = (cache.acts.back() * layer.w).rowwise() + layer.b.transpose();
    cache.acts.push_back(apply_activation(layer.act, std::move(a)));
  }
  return cache;
}

inline Eigen::MatrixXd forward(const Mlp& net, const Eigen::MatrixXd& x) {
  return forward_cached(net, x).acts.back();
}

struct MlpGrads {
  std::vector<Eigen::MatrixXd> dw;
  std::vector<Eigen::VectorXd> db;
  Eigen::MatrixXd dinput;
};

// dout is dLoss/dOutput for the batch; returns parameter gradients and
// the gradient with respect to the input batch.
inline MlpGrads backward(const Mlp& net, const ForwardCache& cache,
                         const Eigen::MatrixXd& dout) {
  const size_t L = net.layers.size();
  if (cache.acts.size() != L + 1)
    throw std::invalid_argument("backward: cache does not match net");
  if (dout.rows() != cache.acts.back().rows() ||
      dout.cols() != cache.acts.back().cols())
    throw std::invalid_argument("backward: dout shape mismatch");

  MlpGrads g;
  g.dw.resize(L);
  g.db.resize(L);
  Eigen::MatrixXd delta = dout;
  for (size_t l = L; l-- > 0;) {
    const auto& layer = net.layers[l];
    delta = delta.cwiseProduct(
        activation_deriv_from_value(layer.act, cache.acts[l + 1]));
    g.dw[l] = cache.acts[l].transpose() * delta;
    g.db[l] = delta.colwise().sum();
    if (l > 0) delta = (delta * layer.w.transpose()).eval();
    else g.dinput = delta * layer.w.transpose();
  }
  return g;
}

struct ClipSpec {
  bool enabled = false;
  double lo = -1.0;
  double hi = 1.0;
};

inline void clip_params(Mlp& net, const ClipSpec& clip) {
  if (!clip.enabled) return;
  for (auto& layer : net.layers) {
    layer.w = layer.w.cwiseMax(clip.lo).cwiseMin(clip.hi);
    layer.b = layer.b.cwiseMax(clip.lo).cwiseMin(clip.hi);
  }
}

inline Eigen::Index param_count(const Mlp& net) {
  Eigen::Index n = 0;
  for (const auto& layer : net.layers) n += layer.w.size() + layer.b.size();
  return n;
}

inline Eigen::VectorXd flatten_params(const Mlp& net) {
  Eigen::VectorXd out(param_count(net));
  Eigen::Index at = 0;
  for (const auto& layer : net.layers) {
    out.segment(at, layer.w.size()) =
        Eigen::Map<const Eigen::VectorXd>(layer.w.data(), layer.w.size());
    at += layer.w.size();
    out.segment(at, layer.b.size()) = layer.b;
    at += layer.b.size();
  }
  return out;
}

inline void unflatten_params(Mlp& net, const Eigen::VectorXd& v) {
  if (v.size() != param_count(net))
    throw std::invalid_argument("unflatten_params: size mismatch");
  Eigen::Index at = 0;
  for (auto& layer : net.layers) {
    layer.w = Eigen::Map<const Eigen::MatrixXd>(v.data() + at, layer.w.rows(),
                                                layer.w.cols());
    at += layer.w.size();
    layer.b = v.segment(at, layer.b.size());
    at += layer.b.size();
  }
}

inline Eigen::VectorXd flatten_grads(const Mlp& net, const MlpGrads& g) {
  Eigen::VectorXd out(param_count(net));
  Eigen::Index at = 0;
  for (size_t l = 0; l < net.layers.size(); ++l) {
    out.segment(at, g.dw[l].size()) =
        Eigen::Map<const Eigen::VectorXd>(g.dw[l].data(), g.dw[l].size());
    at += g.dw[l].size();
    out.segment(at, g.db[l].size()) = g.db[l];
    at += g.db[l].size();
  }
  return out;
}

}  // namespace pdgan
