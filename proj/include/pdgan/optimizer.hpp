#pragma once

// First-order optimizers over Mlp parameters.  State buffers are sized
// lazily on the first step so one OptimizerState can be declared next to
// the net it drives without extra wiring.

#include <pdgan/mlp.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace pdgan {

struct OptimizerConfig {
  enum class Kind { sgd, adam, rmsprop };
  Kind kind = Kind::sgd;
  double lr = 1e-3;
  double beta1 = 0.9;    // adam
  double beta2 = 0.999;  // adam
  double decay = 0.9;    // rmsprop
  double momentum = 0.0; // rmsprop
  // Denominator offset in adam/rmsprop.  Gradients below this scale are
  // effectively flattened, which matters when losses ride on kernel
  // tails; keep it configurable.
  double eps_hat = 1e-8;

  static OptimizerConfig sgd(double lr) { return {Kind::sgd, lr}; }
  static OptimizerConfig adam(double lr, double eps_hat = 1e-8) {
    OptimizerConfig c;
    c.kind = Kind::adam;
    c.lr = lr;
    c.eps_hat = eps_hat;
    return c;
  }
  static OptimizerConfig rmsprop(double lr, double eps_hat = 1e-8) {
    OptimizerConfig c;
    c.kind = Kind::rmsprop;
    c.lr = lr;
    c.eps_hat = eps_hat;
    return c;
  }
};

inline OptimizerConfig::Kind optimizer_kind_from_name(const std::string& name) {
  if (name == "sgd") return OptimizerConfig::Kind::sgd;
  if (name == "adam") return OptimizerConfig::Kind::adam;
  if (name == "rmsprop") return OptimizerConfig::Kind::rmsprop;
  throw std::invalid_argument("unknown optimizer: " + name);
}

struct OptimizerState {
  OptimizerConfig cfg;
  long step_count = 0;
  std::vector<Eigen::MatrixXd> mw, vw;
  std::vector<Eigen::VectorXd> mb, vb;

  explicit OptimizerState(OptimizerConfig c = {}) : cfg(c) {}

  void reset() {
    step_count = 0;
    mw.clear();
    vw.clear();
    mb.clear();
    vb.clear();
  }
};

namespace detail {

template <class Arr>
void ensure_like(std::vector<Arr>& buf, const std::vector<Arr>& ref) {
  if (buf.size() == ref.size()) return;
  buf.clear();
  for (const auto& r : ref) buf.push_back(Arr::Zero(r.rows(), r.cols()));
}

// One in-place update of a parameter block.  g already carries the sign
// of travel (descent by default, negated for ascent).
template <class Arr>
void apply_update(Arr& p, const Arr& g, Arr& m, Arr& v,
                  const OptimizerConfig& c, long t) {
  switch (c.kind) {
    case OptimizerConfig::Kind::sgd:
      p -= c.lr * g;
      return;
    case OptimizerConfig::Kind::adam: {
      m = c.beta1 * m + (1.0 - c.beta1) * g;
      v = c.beta2 * v + (1.0 - c.beta2) * g.cwiseProduct(g);
      const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(t));
      const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(t));
      Arr mhat = m / bc1;
      Arr vhat = v / bc2;
      p -= c.lr *
           mhat.cwiseQuotient((vhat.cwiseSqrt().array() + c.eps_hat).matrix());
      return;
    }
    case OptimizerConfig::Kind::rmsprop: {
      v = c.decay * v + (1.0 - c.decay) * g.cwiseProduct(g);
      Arr step =
          c.lr * g.cwiseQuotient((v.cwiseSqrt().array() + c.eps_hat).matrix());
      if (c.momentum > 0.0) {
        m = c.momentum * m + step;
        p -= m;
      } else {
        p -= step;
      }
      return;
    }
  }
  throw std::logic_error("apply_update: bad optimizer kind");
}

}  // namespace detail

// Applies one optimizer update to every layer.  ascend flips the sign of
// the gradients, so adam/rmsprop statistics see the flipped values too
// (equivalent to maximizing the negated loss).
inline void optimizer_step(Mlp& net, const MlpGrads& grads,
                           OptimizerState& state, bool ascend = false) {
  if (grads.dw.size() != net.layers.size())
    throw std::invalid_argument("optimizer_step: gradient/net mismatch");
  std::vector<Eigen::MatrixXd> ref_w;
  std::vector<Eigen::VectorXd> ref_b;
  for (const auto& layer : net.layers) {
    ref_w.push_back(layer.w);
    ref_b.push_back(layer.b);
  }
  detail::ensure_like(state.mw, ref_w);
  detail::ensure_like(state.vw, ref_w);
  detail::ensure_like(state.mb, ref_b);
  detail::ensure_like(state.vb, ref_b);

  ++state.step_count;
  const double sign = ascend ? -1.0 : 1.0;
  for (size_t l = 0; l < net.layers.size(); ++l) {
    Eigen::MatrixXd gw = sign * grads.dw[l];
    Eigen::VectorXd gb = sign * grads.db[l];
    detail::apply_update(net.layers[l].w, gw, state.mw[l], state.vw[l],
                         state.cfg, state.step_count);
    detail::apply_update(net.layers[l].b, gb, state.mb[l], state.vb[l],
                         state.cfg, state.step_count);
  }
}

}  // namespace pdgan
