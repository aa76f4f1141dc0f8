#pragma once

// Divergence catalogue for the two-player formulation
//   L(D, p_g) = sum_x p_d(x) f0(D(x)) + p_g(x) f1(D(x)),
// with f0, f1 concave on a box domain so the inner maximization over D
// decouples pointwise.  Each entry carries the closed-form pointwise
// maximizer d*(p_d, p_g) for cross-checking.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdgan {

enum class DivergenceId {
  kl,
  reverse_kl,
  pearson_chi2,
  squared_hellinger,
  jensen_shannon,
  approx_wgan,
  quadratic_other,
};

struct DivergenceSpec {
  DivergenceId id{};
  std::string name;
  double domain_lo = 0.0;
  double domain_hi = 1.0;

  std::function<double(double)> f0, f1;
  std::function<double(double)> f0_deriv, f1_deriv;
  // Pointwise argmax of p_d f0(d) + p_g f1(d) before clamping to the
  // domain.  Plain IEEE arithmetic: may return +-inf, or NaN at 0/0.
  std::function<double(double, double)> d_star_raw;

  double clamp(double d) const {
    if (std::isnan(d)) return 0.5 * (domain_lo + domain_hi);
    return std::min(domain_hi, std::max(domain_lo, d));
  }
  bool in_domain(double d) const { return d >= domain_lo && d <= domain_hi; }
};

inline const std::vector<std::string>& divergence_names() {
  static const std::vector<std::string> names = {
      "kl",           "reverse_kl",     "pearson_chi2", "squared_hellinger",
      "jensen_shannon", "approx_wgan",  "quadratic_other"};
  return names;
}

inline DivergenceId divergence_from_name(const std::string& name) {
  const auto& names = divergence_names();
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<DivergenceId>(i);
  throw std::invalid_argument("unknown divergence: " + name);
}

// epsilon_wgan: curvature of the quadratic regularizer in approx_wgan.
// box_epsilon: interior margin of the [eps, 1-eps] domain used by
// jensen_shannon so its logs stay bounded on the closed box.
inline DivergenceSpec make_divergence(DivergenceId id, double epsilon_wgan = 0.1,
                                      double box_epsilon = 0.05) {
  if (!(epsilon_wgan > 0.0))
    throw std::invalid_argument("make_divergence: epsilon_wgan must be > 0");
  if (!(box_epsilon > 0.0 && box_epsilon < 0.5))
    throw std::invalid_argument("make_divergence: box_epsilon must be in (0, 0.5)");

  // Positive-domain entries use a tiny positive floor standing in for the
  // open endpoint at 0; the symmetric entries use [-bound, bound].
  constexpr double kPosFloor = 1e-6;
  constexpr double kBound = 100.0;

  DivergenceSpec s;
  s.id = id;
  s.name = divergence_names()[static_cast<size_t>(id)];
  switch (id) {
    case DivergenceId::kl:
      s.domain_lo = kPosFloor;
      s.domain_hi = kBound;
      s.f0 = [](double d) { return std::log(d); };
      s.f0_deriv = [](double d) { return 1.0 / d; };
      s.f1 = [](double d) { return 1.0 - d; };
      s.f1_deriv = [](double) { return -1.0; };
      s.d_star_raw = [](double pd, double pg) { return pd / pg; };
      break;
    case DivergenceId::reverse_kl:
      s.domain_lo = kPosFloor;
      s.domain_hi = kBound;
      s.f0 = [](double d) { return -d; };
      s.f0_deriv = [](double) { return -1.0; };
      s.f1 = [](double d) { return std::log(d); };
      s.f1_deriv = [](double d) { return 1.0 / d; };
      s.d_star_raw = [](double pd, double pg) { return pg / pd; };
      break;
    case DivergenceId::pearson_chi2:
      s.domain_lo = -kBound;
      s.domain_hi = kBound;
      s.f0 = [](double d) { return d; };
      s.f0_deriv = [](double) { return 1.0; };
      s.f1 = [](double d) { return -0.25 * d * d - d; };
      s.f1_deriv = [](double d) { return -0.5 * d - 1.0; };
      s.d_star_raw = [](double pd, double pg) { return 2.0 * (pd - pg) / pg; };
      break;
    case DivergenceId::squared_hellinger:
      s.domain_lo = kPosFloor;
      s.domain_hi = kBound;
      s.f0 = [](double d) { return 1.0 - d; };
      s.f0_deriv = [](double) { return -1.0; };
      s.f1 = [](double d) { return 1.0 - 1.0 / d; };
      s.f1_deriv = [](double d) { return 1.0 / (d * d); };
      s.d_star_raw = [](double pd, double pg) { return std::sqrt(pg / pd); };
      break;
    case DivergenceId::jensen_shannon:
      s.domain_lo = box_epsilon;
      s.domain_hi = 1.0 - box_epsilon;
      s.f0 = [](double d) { return std::log(d); };
      s.f0_deriv = [](double d) { return 1.0 / d; };
      s.f1 = [](double d) { return std::log(2.0 * (1.0 - d)); };
      s.f1_deriv = [](double d) { return -1.0 / (1.0 - d); };
      s.d_star_raw = [](double pd, double pg) { return pd / (pd + pg); };
      break;
    case DivergenceId::approx_wgan:
      s.domain_lo = -kBound;
      s.domain_hi = kBound;
      s.f0 = [epsilon_wgan](double d) { return d - epsilon_wgan * d * d; };
      s.f0_deriv = [epsilon_wgan](double d) { return 1.0 - 2.0 * epsilon_wgan * d; };
      s.f1 = [](double d) { return -d; };
      s.f1_deriv = [](double) { return -1.0; };
      s.d_star_raw = [epsilon_wgan](double pd, double pg) {
        return (pd - pg) / (2.0 * epsilon_wgan * pd);
      };
      break;
    case DivergenceId::quadratic_other:
      s.domain_lo = -kBound;
      s.domain_hi = kBound;
      s.f0 = [](double d) { return -0.5 * d * d + d; };
      s.f0_deriv = [](double d) { return 1.0 - d; };
      s.f1 = [](double d) { return d - 2.0; };
      s.f1_deriv = [](double) { return 1.0; };
      s.d_star_raw = [](double pd, double pg) { return (pd + pg) / pd; };
      break;
    default:
      throw std::invalid_argument("make_divergence: bad id");
  }
  return s;
}

inline DivergenceSpec make_divergence(const std::string& name,
                                      double epsilon_wgan = 0.1,
                                      double box_epsilon = 0.05) {
  return make_divergence(divergence_from_name(name), epsilon_wgan, box_epsilon);
}

// Clamped pointwise maximizer.  0/0 resolves to the domain midpoint.
inline double optimal_discriminator(const DivergenceSpec& spec, double p_d,
                                    double p_g) {
  return spec.clamp(spec.d_star_raw(p_d, p_g));
}

// Tabulated f0/f1 over a uniform grid on the domain.  Building the table
// once and reusing it across many (p_d, p_g) pairs keeps exhaustive
// argmax checks cheap.
struct DiscriminatorGrid {
  std::vector<double> d, f0, f1;

  DiscriminatorGrid(const DivergenceSpec& spec, double resolution) {
    if (!(resolution > 0.0))
      throw std::invalid_argument("DiscriminatorGrid: resolution must be > 0");
    const long n = static_cast<long>(
        std::floor((spec.domain_hi - spec.domain_lo) / resolution + 0.5));
    d.reserve(n + 1);
    f0.reserve(n + 1);
    f1.reserve(n + 1);
    for (long i = 0; i <= n; ++i) {
      double x = spec.domain_lo + resolution * static_cast<double>(i);
      if (x > spec.domain_hi) x = spec.domain_hi;
      d.push_back(x);
      f0.push_back(spec.f0(x));
      f1.push_back(spec.f1(x));
    }
  }

  double argmax(double p_d, double p_g) const {
    double best = -std::numeric_limits<double>::infinity();
    size_t best_i = 0;
    for (size_t i = 0; i < d.size(); ++i) {
      double v = p_d * f0[i] + p_g * f1[i];
      if (v > best) {
        best = v;
        best_i = i;
      }
    }
    return d[best_i];
  }
};

// |closed form - exhaustive grid argmax| at the given resolution.
inline double verify_optimality(const DivergenceSpec& spec, double p_d,
                                double p_g, double resolution) {
  DiscriminatorGrid grid(spec, resolution);
  return std::abs(grid.argmax(p_d, p_g) - optimal_discriminator(spec, p_d, p_g));
}

}  // namespace pdgan
