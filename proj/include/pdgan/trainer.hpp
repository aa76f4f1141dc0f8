#pragma once

// Minibatch two-network training.  Each outer iteration:
//   1. k0 ascent steps of the discriminator on the divergence objective
//        (1/m1) sum f0(D(x_i)) + (1/m2) sum f1(D(G(z_j))),
//   2. per-data-point matching targets
//        t_i = p_hat(x_i) - alpha * f1(D(x_i)),
//      with D clamped into the divergence domain so targets stay bounded,
//   3. one descent step of the generator on
//        (1/m2) sum f1(D(G(z_j))) + (1/m1) sum (t_i - p_hat(x_i))^2,
//      where p_hat is the kernel estimate of generated mass at x_i.
//
// The squared matching term is two-sided: it pulls generated mass toward
// under-covered data points and pushes it off over-covered ones, and its
// gradient reaches across kernel tails where the adversarial term has
// already saturated.

#include <pdgan/divergence.hpp>
#include <pdgan/kde.hpp>
#include <pdgan/mlp.hpp>
#include <pdgan/optimizer.hpp>

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace pdgan {

// Values D(p) and per-row input gradients dD/dp for a batch of points.
// Generator updates only need this interface, so frozen or synthetic
// critics can stand in for a live net.
struct CriticBatch {
  Eigen::VectorXd values;
  Eigen::MatrixXd input_grads;
};

using CriticFn = std::function<CriticBatch(const Eigen::MatrixXd&)>;

// Non-owning view of a scalar-output net; the net must outlive the view.
inline CriticFn mlp_critic(const Mlp& disc) {
  if (disc.out_dim() != 1)
    throw std::invalid_argument("mlp_critic: net must have scalar output");
  return [&disc](const Eigen::MatrixXd& pts) {
    ForwardCache cache = forward_cached(disc, pts);
    MlpGrads g = backward(disc, cache, Eigen::MatrixXd::Ones(pts.rows(), 1));
    return CriticBatch{cache.output().col(0), g.dinput};
  };
}

// Numerical guard for f0/f1 evaluation on raw net outputs.  Keeps logs
// finite when a sigmoid rounds to exactly 0 or 1; the unbounded
// polynomial entries need no guard.
inline double loss_clamp(const DivergenceSpec& spec, double d) {
  constexpr double g = 1e-12;
  switch (spec.id) {
    case DivergenceId::jensen_shannon:
      return std::min(1.0 - g, std::max(g, d));
    case DivergenceId::kl:
    case DivergenceId::reverse_kl:
    case DivergenceId::squared_hellinger:
      return std::max(g, d);
    default:
      return d;
  }
}

// Discriminator objective and parameter gradients at the current weights.
inline MlpGrads discriminator_gradients(const Mlp& disc,
                                        const Eigen::MatrixXd& data,
                                        const Eigen::MatrixXd& fake,
                                        const DivergenceSpec& spec,
                                        double* objective = nullptr) {
  if (disc.out_dim() != 1)
    throw std::invalid_argument("discriminator_gradients: scalar output expected");
  const Eigen::Index m1 = data.rows(), m2 = fake.rows();
  if (m1 == 0 || m2 == 0)
    throw std::invalid_argument("discriminator_gradients: empty batch");

  Eigen::MatrixXd all(m1 + m2, data.cols());
  all.topRows(m1) = data;
  all.bottomRows(m2) = fake;
  ForwardCache cache = forward_cached(disc, all);
  const Eigen::MatrixXd& out = cache.output();

  Eigen::MatrixXd dout(m1 + m2, 1);
  double obj = 0.0;
  for (Eigen::Index i = 0; i < m1; ++i) {
    double d = loss_clamp(spec, out(i, 0));
    obj += spec.f0(d) / static_cast<double>(m1);
    dout(i, 0) = spec.f0_deriv(d) / static_cast<double>(m1);
  }
  for (Eigen::Index j = 0; j < m2; ++j) {
    double d = loss_clamp(spec, out(m1 + j, 0));
    obj += spec.f1(d) / static_cast<double>(m2);
    dout(m1 + j, 0) = spec.f1_deriv(d) / static_cast<double>(m2);
  }
  if (objective) *objective = obj;
  return backward(disc, cache, dout);
}

// One ascent step; returns the objective before the update.
inline double discriminator_step(Mlp& disc, OptimizerState& opt,
                                 const Eigen::MatrixXd& data,
                                 const Eigen::MatrixXd& fake,
                                 const DivergenceSpec& spec,
                                 const ClipSpec& clip = {}) {
  double obj = 0.0;
  MlpGrads g = discriminator_gradients(disc, data, fake, spec, &obj);
  optimizer_step(disc, g, opt, /*ascend=*/true);
  clip_params(disc, clip);
  return obj;
}

// Matching targets t_i = p_hat(x_i) - alpha f1(D(x_i)).  D is clamped
// into the divergence domain (not just the numerical guard): bounded
// f1 keeps targets finite even against a saturated discriminator.
inline Eigen::VectorXd compute_target_probs(const Eigen::MatrixXd& data,
                                            const Eigen::MatrixXd& gen_samples,
                                            const Eigen::VectorXd& disc_on_data,
                                            const DivergenceSpec& spec,
                                            double alpha, double sigma) {
  if (disc_on_data.size() != data.rows())
    throw std::invalid_argument("compute_target_probs: size mismatch");
  Eigen::VectorXd p_hat = estimate_probs(data, gen_samples, sigma);
  Eigen::VectorXd t(p_hat.size());
  for (Eigen::Index i = 0; i < t.size(); ++i)
    t[i] = p_hat[i] - alpha * spec.f1(spec.clamp(disc_on_data[i]));
  return t;
}

struct GenTerms {
  double adversarial = 0.0;
  double penalty = 0.0;
};

// Generator loss gradients through a critic view.  matching enables the
// squared target term; with it off this is the plain minimax generator.
inline MlpGrads generator_gradients(const Mlp& gen, const CriticFn& critic,
                                    const Eigen::MatrixXd& data,
                                    const Eigen::MatrixXd& noise,
                                    const Eigen::VectorXd& targets,
                                    const DivergenceSpec& spec, double sigma,
                                    bool matching, GenTerms* terms = nullptr) {
  ForwardCache cache = forward_cached(gen, noise);
  const Eigen::MatrixXd& y = cache.output();
  const Eigen::Index m1 = data.rows(), m2 = y.rows();
  if (m2 == 0) throw std::invalid_argument("generator_gradients: empty batch");

  CriticBatch cb = critic(y);
  if (cb.values.size() != m2 || cb.input_grads.rows() != m2)
    throw std::invalid_argument("generator_gradients: critic shape mismatch");

  GenTerms out;
  Eigen::MatrixXd dy = Eigen::MatrixXd::Zero(m2, y.cols());
  for (Eigen::Index j = 0; j < m2; ++j) {
    double d = loss_clamp(spec, cb.values[j]);
    out.adversarial += spec.f1(d) / static_cast<double>(m2);
    dy.row(j) =
        (spec.f1_deriv(d) / static_cast<double>(m2)) * cb.input_grads.row(j);
  }

  if (matching) {
    if (targets.size() != m1)
      throw std::invalid_argument("generator_gradients: targets/data mismatch");
    Eigen::MatrixXd k = kernel_matrix(y, data, sigma);        // m2 x m1
    Eigen::VectorXd p_hat = k.colwise().mean();               // mass at x_i
    Eigen::VectorXd resid = targets - p_hat;
    out.penalty = resid.squaredNorm() / static_cast<double>(m1);
    // d/dy_j sum_i resid_i^2 / m1
    //   = sum_i (4 / (m1 m2 sigma^2)) resid_i k(y_j, x_i) (y_j - x_i)
    Eigen::VectorXd coef =
        (4.0 / (static_cast<double>(m1 * m2) * sigma * sigma)) * resid;
    Eigen::MatrixXd w = k.array().rowwise() * coef.transpose().array();
    dy += w.rowwise().sum().asDiagonal() * y - w * data;
  }

  if (terms) *terms = out;
  MlpGrads g = backward(gen, cache, dy);
  return g;
}

inline GenTerms generator_step(Mlp& gen, OptimizerState& opt,
                               const CriticFn& critic,
                               const Eigen::MatrixXd& data,
                               const Eigen::MatrixXd& noise,
                               const Eigen::VectorXd& targets,
                               const DivergenceSpec& spec, double sigma,
                               bool matching) {
  GenTerms terms;
  MlpGrads g = generator_gradients(gen, critic, data, noise, targets, spec,
                                   sigma, matching, &terms);
  optimizer_step(gen, g, opt, /*ascend=*/false);
  return terms;
}

struct PretrainReport {
  long steps = 0;
  double mean_err = 0.0;   // |mean(G(z)) - target|, infinity norm
  double sample_std = 0.0; // scalar spread around the sample mean
};

// Squared-distance pretraining of the generator toward a fixed point in
// sample space.  Used to place initial generated mass deliberately.
template <class NoiseFn>
PretrainReport pretrain_generator(Mlp& gen, OptimizerState& opt,
                                  const Eigen::VectorXd& target,
                                  NoiseFn&& sample_noise, int batch,
                                  long max_steps, double tol_mean = 0.1,
                                  double tol_std = 0.2) {
  if (target.size() != gen.out_dim())
    throw std::invalid_argument("pretrain_generator: target dimension mismatch");

  auto measure = [&](PretrainReport& r) {
    Eigen::MatrixXd z = sample_noise(512);
    Eigen::MatrixXd y = forward(gen, z);
    Eigen::VectorXd mean = y.colwise().mean();
    r.mean_err = (mean - target).cwiseAbs().maxCoeff();
    r.sample_std = std::sqrt(
        (y.rowwise() - mean.transpose()).rowwise().squaredNorm().mean());
  };

  PretrainReport report;
  for (long s = 0; s < max_steps; ++s) {
    Eigen::MatrixXd z = sample_noise(batch);
    ForwardCache cache = forward_cached(gen, z);
    Eigen::MatrixXd dy =
        (2.0 / static_cast<double>(batch)) *
        (cache.output().rowwise() - target.transpose());
    MlpGrads g = backward(gen, cache, dy);
    optimizer_step(gen, g, opt, /*ascend=*/false);
    report.steps = s + 1;
    if ((s + 1) % 50 == 0) {
      measure(report);
      if (report.mean_err <= tol_mean && report.sample_std <= tol_std) return report;
    }
  }
  measure(report);
  return report;
}

// Lower-tail-insensitive location summary: q in [0,1], linear
// interpolation between order statistics.
inline double sample_quantile(Eigen::VectorXd v, double q) {
  if (v.size() == 0) throw std::invalid_argument("sample_quantile: empty");
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("sample_quantile: q outside [0,1]");
  std::sort(v.data(), v.data() + v.size());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<Eigen::Index>(std::floor(pos));
  if (lo + 1 >= v.size()) return v[v.size() - 1];
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

// Fraction of samples landing within radius of each center.
inline Eigen::VectorXd mode_fractions(const Eigen::MatrixXd& samples,
                                      const Eigen::MatrixXd& centers,
                                      double radius) {
  Eigen::VectorXd frac = Eigen::VectorXd::Zero(centers.rows());
  for (Eigen::Index s = 0; s < samples.rows(); ++s) {
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
      if ((samples.row(s) - centers.row(c)).norm() <= radius) {
        frac[c] += 1.0;
        break;  // radius << center spacing, so at most one hit
      }
    }
  }
  return frac / static_cast<double>(samples.rows());
}

inline int mode_coverage(const Eigen::MatrixXd& samples,
                         const Eigen::MatrixXd& centers, double radius,
                         double min_fraction) {
  Eigen::VectorXd frac = mode_fractions(samples, centers, radius);
  return static_cast<int>((frac.array() >= min_fraction).count());
}

}  // namespace pdgan
