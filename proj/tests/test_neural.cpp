#include <pdgan/mlp.hpp>
#include <pdgan/optimizer.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace pdgan;
using Catch::Approx;

namespace {

Mlp random_net(const std::vector<Eigen::Index>& widths,
               const std::vector<Activation>& acts, std::uint64_t seed) {
  Mlp net = make_mlp(widths, acts);
  std::mt19937_64 rng(seed);
  init_xavier(net, rng);
  // nonzero biases so their gradients are exercised off the origin
  std::normal_distribution<double> n(0.0, 0.1);
  for (auto& layer : net.layers)
    for (Eigen::Index i = 0; i < layer.b.size(); ++i) layer.b[i] = n(rng);
  return net;
}

// scalar test loss: weighted sum of outputs over the batch
double weighted_loss(const Mlp& net, const Eigen::MatrixXd& x,
                     const Eigen::MatrixXd& w) {
  return (forward(net, x).array() * w.array()).sum();
}

// finite differences lie across relu kinks; keep all pre-activations
// clear of zero before differentiating
bool kink_free(const Mlp& net, const Eigen::MatrixXd& x, double margin) {
  Eigen::MatrixXd h = x;
  for (const auto& layer : net.layers) {
    Eigen::MatrixXd a = (h * layer.w).rowwise() + layer.b.transpose();
    if (layer.act == Activation::relu &&
        (a.array().abs() < margin).any())
      return false;
    h = apply_activation(layer.act, std::move(a));
  }
  return true;
}

}  // namespace

TEST_CASE("forward matches hand computation") {
  Mlp net = make_mlp({2, 2}, {Activation::linear});
  net.layers[0].w << 1.0, 2.0, 3.0, 4.0;
  net.layers[0].b << 0.5, -0.5;
  Eigen::MatrixXd x(1, 2);
  x << 1.0, 1.0;
  Eigen::MatrixXd y = forward(net, x);
  CHECK(y(0, 0) == Approx(4.5));   // 1+3+0.5
  CHECK(y(0, 1) == Approx(5.5));   // 2+4-0.5

  net.layers[0].act = Activation::relu;
  net.layers[0].b << -10.0, -0.5;
  y = forward(net, x);
  CHECK(y(0, 0) == 0.0);
  CHECK(y(0, 1) == Approx(5.5));

  net.layers[0].act = Activation::sigmoid;
  net.layers[0].b << 0.0, 0.0;
  y = forward(net, x);
  CHECK(y(0, 0) == Approx(1.0 / (1.0 + std::exp(-4.0))));
}

TEST_CASE("sigmoid is stable at extreme arguments") {
  CHECK(sigmoid(800.0) == 1.0);
  CHECK(sigmoid(-800.0) == 0.0);
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(std::isfinite(sigmoid(37.0)));
}

TEST_CASE("xavier init bounds and determinism") {
  std::mt19937_64 rng1(5), rng2(5);
  Mlp a = make_mlp({3, 7, 2}, {Activation::relu, Activation::linear});
  Mlp b = make_mlp({3, 7, 2}, {Activation::relu, Activation::linear});
  init_xavier(a, rng1);
  init_xavier(b, rng2);
  CHECK((flatten_params(a).array() == flatten_params(b).array()).all());

  const double r0 = std::sqrt(6.0 / (3 + 7));
  CHECK(a.layers[0].w.cwiseAbs().maxCoeff() <= r0);
  CHECK(a.layers[0].w.cwiseAbs().maxCoeff() > 0.0);
  CHECK(a.layers[0].b.cwiseAbs().maxCoeff() == 0.0);
  const double r1 = std::sqrt(6.0 / (7 + 2));
  CHECK(a.layers[1].w.cwiseAbs().maxCoeff() <= r1);
}

TEST_CASE("backward matches finite differences on parameters") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n;
  const std::vector<std::vector<Activation>> act_sets = {
      {Activation::relu, Activation::sigmoid},
      {Activation::sigmoid, Activation::linear},
      {Activation::relu, Activation::relu},
  };
  for (size_t a = 0; a < act_sets.size(); ++a) {
    for (int inst = 0; inst < 7; ++inst) {
      Mlp net = random_net({2, 4, 3}, act_sets[a], 100 * a + inst);
      Eigen::MatrixXd x(5, 2), w(5, 3);
      do {
        for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
      } while (!kink_free(net, x, 1e-4));
      for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = n(rng);

      ForwardCache cache = forward_cached(net, x);
      MlpGrads grads = backward(net, cache, w);
      Eigen::VectorXd flat = flatten_grads(net, grads);

      Eigen::VectorXd theta = flatten_params(net);
      const double h = 1e-6;
      for (Eigen::Index i = 0; i < theta.size(); ++i) {
        Eigen::VectorXd tp = theta, tm = theta;
        tp[i] += h;
        tm[i] -= h;
        Mlp np = net, nm = net;
        unflatten_params(np, tp);
        unflatten_params(nm, tm);
        const double fd =
            (weighted_loss(np, x, w) - weighted_loss(nm, x, w)) / (2.0 * h);
        CHECK(flat[i] == Approx(fd).epsilon(1e-5).margin(1e-7));
      }
    }
  }
}

TEST_CASE("backward input gradients match finite differences") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  Mlp net = random_net({3, 5, 2}, {Activation::sigmoid, Activation::linear}, 2);
  Eigen::MatrixXd x(4, 3), w(4, 2);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = n(rng);

  ForwardCache cache = forward_cached(net, x);
  MlpGrads grads = backward(net, cache, w);

  const double h = 1e-6;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      Eigen::MatrixXd xp = x, xm = x;
      xp(r, c) += h;
      xm(r, c) -= h;
      const double fd =
          (weighted_loss(net, xp, w) - weighted_loss(net, xm, w)) / (2.0 * h);
      CHECK(grads.dinput(r, c) == Approx(fd).epsilon(1e-5).margin(1e-7));
    }
  }
}

TEST_CASE("flatten/unflatten round trip") {
  Mlp net = random_net({2, 3, 1}, {Activation::relu, Activation::linear}, 13);
  Eigen::VectorXd theta = flatten_params(net);
  CHECK(theta.size() == param_count(net));
  Mlp other = make_mlp({2, 3, 1}, {Activation::relu, Activation::linear});
  unflatten_params(other, theta);
  CHECK((flatten_params(other).array() == theta.array()).all());
  CHECK_THROWS_AS(unflatten_params(other, Eigen::VectorXd::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("sgd step is exactly p - lr*g") {
  Mlp net = random_net({2, 2, 1}, {Activation::relu, Activation::linear}, 3);
  Eigen::VectorXd before = flatten_params(net);
  Eigen::MatrixXd x(3, 2);
  x << 1.0, 2.0, -1.0, 0.5, 0.3, -0.7;
  ForwardCache cache = forward_cached(net, x);
  MlpGrads g = backward(net, cache, Eigen::MatrixXd::Ones(3, 1));
  Eigen::VectorXd flat_g = flatten_grads(net, g);

  OptimizerState st(OptimizerConfig::sgd(0.05));
  optimizer_step(net, g, st);
  CHECK((flatten_params(net) - (before - 0.05 * flat_g)).cwiseAbs().maxCoeff() ==
        0.0);

  // ascend adds instead
  Mlp net2 = random_net({2, 2, 1}, {Activation::relu, Activation::linear}, 3);
  OptimizerState st2(OptimizerConfig::sgd(0.05));
  optimizer_step(net2, g, st2, /*ascend=*/true);
  CHECK((flatten_params(net2) - (before + 0.05 * flat_g)).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("adam first step follows the bias-corrected formula") {
  Mlp net = make_mlp({1, 1}, {Activation::linear});
  net.layers[0].w(0, 0) = 2.0;
  net.layers[0].b(0) = 1.0;
  MlpGrads g;
  g.dw = {Eigen::MatrixXd::Constant(1, 1, 0.3)};
  g.db = {Eigen::VectorXd::Constant(1, -0.2)};

  const double lr = 0.01, eps = 1e-8;
  OptimizerState st(OptimizerConfig::adam(lr, eps));
  optimizer_step(net, g, st);
  // m_hat = g, v_hat = g^2 after bias correction at t=1
  CHECK(net.layers[0].w(0, 0) ==
        Approx(2.0 - lr * 0.3 / (0.3 + eps)).epsilon(1e-12));
  CHECK(net.layers[0].b(0) ==
        Approx(1.0 - lr * (-0.2) / (0.2 + eps)).epsilon(1e-12));
}

TEST_CASE("adam with tiny eps_hat keeps sign-sized steps on tiny gradients") {
  Mlp net = make_mlp({1, 1}, {Activation::linear});
  net.layers[0].w(0, 0) = 0.0;
  MlpGrads g;
  g.dw = {Eigen::MatrixXd::Constant(1, 1, 1e-28)};
  g.db = {Eigen::VectorXd::Zero(1)};

  OptimizerState tiny(OptimizerConfig::adam(1e-4, 1e-30));
  optimizer_step(net, g, tiny);
  CHECK(std::abs(net.layers[0].w(0, 0)) == Approx(1e-4).epsilon(1e-2));

  // the stock offset flattens the same gradient to (almost) nothing
  Mlp net2 = make_mlp({1, 1}, {Activation::linear});
  net2.layers[0].w(0, 0) = 0.0;
  OptimizerState stock(OptimizerConfig::adam(1e-4, 1e-8));
  optimizer_step(net2, g, stock);
  CHECK(std::abs(net2.layers[0].w(0, 0)) < 1e-20);
}

TEST_CASE("rmsprop first step") {
  Mlp net = make_mlp({1, 1}, {Activation::linear});
  net.layers[0].w(0, 0) = 1.0;
  MlpGrads g;
  g.dw = {Eigen::MatrixXd::Constant(1, 1, 0.5)};
  g.db = {Eigen::VectorXd::Zero(1)};

  const double lr = 0.01, eps = 1e-8;
  OptimizerState st(OptimizerConfig::rmsprop(lr, eps));
  optimizer_step(net, g, st);
  const double v = 0.1 * 0.25;  // (1-decay) g^2
  CHECK(net.layers[0].w(0, 0) ==
        Approx(1.0 - lr * 0.5 / (std::sqrt(v) + eps)).epsilon(1e-12));
}

TEST_CASE("rmsprop momentum accumulates") {
  OptimizerConfig cfg = OptimizerConfig::rmsprop(0.01);
  cfg.momentum = 0.9;
  Mlp net = make_mlp({1, 1}, {Activation::linear});
  net.layers[0].w(0, 0) = 0.0;
  MlpGrads g;
  g.dw = {Eigen::MatrixXd::Constant(1, 1, 1.0)};
  g.db = {Eigen::VectorXd::Zero(1)};

  OptimizerState st(cfg);
  optimizer_step(net, g, st);
  const double w1 = net.layers[0].w(0, 0);
  optimizer_step(net, g, st);
  const double w2 = net.layers[0].w(0, 0);
  // second displacement exceeds the first thanks to momentum carry
  CHECK(std::abs(w2 - w1) > std::abs(w1));
}

TEST_CASE("weight clipping clamps every parameter") {
  Mlp net = make_mlp({2, 3, 1}, {Activation::relu, Activation::linear});
  net.layers[0].w.setConstant(3.0);
  net.layers[0].b.setConstant(-2.5);
  net.layers[1].w.setConstant(-0.4);
  net.layers[1].b.setConstant(0.2);
  ClipSpec clip{true, -1.0, 1.0};
  clip_params(net, clip);
  CHECK((net.layers[0].w.array() == 1.0).all());
  CHECK((net.layers[0].b.array() == -1.0).all());
  CHECK((net.layers[1].w.array() == -0.4).all());
  CHECK((net.layers[1].b.array() == 0.2).all());

  // disabled clip is a no-op
  Mlp net2 = make_mlp({1, 1}, {Activation::linear});
  net2.layers[0].w.setConstant(7.0);
  clip_params(net2, ClipSpec{});
  CHECK(net2.layers[0].w(0, 0) == 7.0);
}
