#pragma once

// Unnormalized Gaussian kernel density estimates and the bandwidth
// schedules used to anneal them during training.

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace pdgan {

// k_sigma(x) = exp(-|x|^2 / sigma^2).  Deliberately unnormalized: the
// matching targets are built from the same kernel, so a normalization
// constant would cancel anyway and only add noise at small sigma.
inline double gaussian_kernel(const Eigen::VectorXd& diff, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_kernel: sigma must be > 0");
  return std::exp(-diff.squaredNorm() / (sigma * sigma));
}

inline double gaussian_kernel(double diff, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_kernel: sigma must be > 0");
  return std::exp(-(diff * diff) / (sigma * sigma));
}

// Kernel matrix K(i,j) = k_sigma(a_i - b_j), rows of a and b are points.
inline Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a,
                                     const Eigen::MatrixXd& b, double sigma) {
  if (a.cols() != b.cols())
    throw std::invalid_argument("kernel_matrix: dimension mismatch");
  if (!(sigma > 0.0)) throw std::invalid_argument("kernel_matrix: sigma must be > 0");
  const double inv_s2 = 1.0 / (sigma * sigma);
  Eigen::VectorXd a2 = a.rowwise().squaredNorm();
  Eigen::VectorXd b2 = b.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = (-2.0 * a * b.transpose()).rowwise() + b2.transpose();
  d2.colwise() += a2;
  // Squared distances can round slightly negative; exp() of a tiny positive
  // value is harmless but keep them clamped for cleanliness.
  return (-d2.cwiseMax(0.0) * inv_s2).array().exp();
}

// Density estimate at each target point from a sample set:
//   p_hat(x_i) = (1/m) sum_j k_sigma(x_i - y_j).
inline Eigen::VectorXd estimate_probs(const Eigen::MatrixXd& targets,
                                      const Eigen::MatrixXd& samples,
                                      double sigma) {
  if (samples.rows() == 0)
    throw std::invalid_argument("estimate_probs: empty sample set");
  Eigen::MatrixXd k = kernel_matrix(targets, samples, sigma);
  return k.rowwise().mean();
}

// Bandwidth schedules.  The scheduled value is either sigma itself or
// sigma^2 (value_is_variance); kernel_sigma_at resolves the difference.
struct BandwidthSchedule {
  enum class Kind { constant, step_change, geometric_decay };

  Kind kind = Kind::constant;
  double initial = 0.5;         // value at t = 0
  bool value_is_variance = false;

  // step_change: value drops from `initial` to `after` at `change_at`.
  double after = 0.1;
  long change_at = 2000;

  // geometric_decay: initial * base^(t / period).
  double base = 0.8;
  double period = 2000.0;

  static BandwidthSchedule constant_sigma(double sigma) {
    BandwidthSchedule s;
    s.kind = Kind::constant;
    s.initial = sigma;
    return s;
  }

  static BandwidthSchedule step_sigma(double sigma0, double sigma1, long change_at) {
    BandwidthSchedule s;
    s.kind = Kind::step_change;
    s.initial = sigma0;
    s.after = sigma1;
    s.change_at = change_at;
    return s;
  }

  // Variance-valued decay: sigma^2(t) = var0 * base^(t / period).
  static BandwidthSchedule geometric_variance(double var0, double base = 0.8,
                                              double period = 2000.0) {
    BandwidthSchedule s;
    s.kind = Kind::geometric_decay;
    s.initial = var0;
    s.value_is_variance = true;
    s.base = base;
    s.period = period;
    return s;
  }
};

// Raw scheduled value at iteration t (sigma or sigma^2 per the flag).
inline double bandwidth_at(const BandwidthSchedule& s, long t) {
  if (t < 0) throw std::invalid_argument("bandwidth_at: t must be >= 0");
  switch (s.kind) {
    case BandwidthSchedule::Kind::constant:
      return s.initial;
    case BandwidthSchedule::Kind::step_change:
      return t < s.change_at ? s.initial : s.after;
    case BandwidthSchedule::Kind::geometric_decay:
      return s.initial * std::pow(s.base, static_cast<double>(t) / s.period);
  }
  throw std::logic_error("bandwidth_at: bad kind");
}

// Kernel width at iteration t, always in sigma units.
inline double kernel_sigma_at(const BandwidthSchedule& s, long t) {
  double v = bandwidth_at(s, t);
  return s.value_is_variance ? std::sqrt(v) : v;
}

}  // namespace pdgan
