#pragma once

// Two-player divergence game over a finite sample space, solved exactly
// in function space: the discriminator vector d is the primal variable
// (box-constrained by the divergence domain) and the generated
// distribution p_g is the dual variable (nonnegative orthant).
//
//   L(d, p_g) = sum_i p_d(i) f0(d_i) + p_g(i) f1(d_i)
//
// p_g is intentionally not forced onto the simplex: at a saddle the dual
// feasibility conditions push it there on the support of p_d.  A simplex
// projection is available as an option for experiments.

#include <pdgan/divergence.hpp>
#include <pdgan/saddle.hpp>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

namespace pdgan {

inline void validate_distribution(const Vector& p) {
  if (p.size() == 0) throw std::invalid_argument("empty distribution");
  if ((p.array() < 0.0).any())
    throw std::invalid_argument("distribution has negative mass");
  if (std::abs(p.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("distribution does not sum to 1");
}

inline Vector uniform_distribution(Eigen::Index n) {
  return Vector::Constant(n, 1.0 / static_cast<double>(n));
}

// Strictly positive random distribution; the floor keeps ratios like
// p_d/p_g away from the extremes so closed-form optima stay interior.
template <class Rng>
Vector random_distribution(Eigen::Index n, Rng& rng, double floor = 0.1) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  Vector p(n);
  for (Eigen::Index i = 0; i < n; ++i) p[i] = u(rng);
  return p / p.sum();
}

// Euclidean projection onto the probability simplex.
inline Vector project_simplex(const Vector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  for (size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    double cand = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - cand > 0.0) tau = cand;
  }
  return (v.array() - tau).cwiseMax(0.0);
}

struct FiniteGanState {
  Vector d;
  Vector p_g;
};

inline double gan_lagrangian(const Vector& p_d, const FiniteGanState& s,
                             const DivergenceSpec& spec) {
  if (p_d.size() != s.d.size() || p_d.size() != s.p_g.size())
    throw std::invalid_argument("gan_lagrangian: size mismatch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < p_d.size(); ++i) {
    if (!spec.in_domain(s.d[i]))
      throw std::invalid_argument("gan_lagrangian: d outside divergence domain");
    total += p_d[i] * spec.f0(s.d[i]) + s.p_g[i] * spec.f1(s.d[i]);
  }
  return total;
}

inline Vector grad_d(const Vector& p_d, const FiniteGanState& s,
                     const DivergenceSpec& spec) {
  Vector g(p_d.size());
  for (Eigen::Index i = 0; i < p_d.size(); ++i)
    g[i] = p_d[i] * spec.f0_deriv(s.d[i]) + s.p_g[i] * spec.f1_deriv(s.d[i]);
  return g;
}

inline Vector grad_pg(const FiniteGanState& s, const DivergenceSpec& spec) {
  Vector g(s.d.size());
  for (Eigen::Index i = 0; i < s.d.size(); ++i) g[i] = spec.f1(s.d[i]);
  return g;
}

struct FiniteGanOptions {
  double init_d = 0.5;          // projected into the divergence domain
  Vector init_p_g;              // empty = uniform
  bool simplex_projection = false;
  SolveOptions solve;
};

// Assemble the saddle problem for a fixed data distribution.
inline SaddleProblem make_finite_gan_problem(const Vector& p_d,
                                             const DivergenceSpec& spec,
                                             bool simplex_projection = false) {
  validate_distribution(p_d);
  const Eigen::Index n = p_d.size();
  SaddleProblem pb;
  pb.dim_x = n;
  pb.dim_lambda = n;
  pb.lagrangian = [p_d, spec](const Vector& d, const Vector& pg) {
    return gan_lagrangian(p_d, {d, pg}, spec);
  };
  pb.grad_x = [p_d, spec](const Vector& d, const Vector& pg) {
    return grad_d(p_d, {d, pg}, spec);
  };
  pb.constraints = [spec](const Vector& d) {
    return grad_pg({d, Vector()}, spec);
  };
  pb.project_x = [spec](const Vector& d) {
    return d.cwiseMax(spec.domain_lo).cwiseMin(spec.domain_hi).eval();
  };
  pb.argmax_x = [p_d, spec](const Vector& pg) {
    Vector d(pg.size());
    for (Eigen::Index i = 0; i < pg.size(); ++i)
      d[i] = optimal_discriminator(spec, p_d[i], pg[i]);
    return d;
  };
  if (simplex_projection)
    pb.project_lambda = [](const Vector& pg) { return project_simplex(pg); };
  return pb;
}

struct FiniteGanRun {
  SolveReport report;
  FiniteGanState final;
};

inline FiniteGanRun train_function_space(const Vector& p_d,
                                         const DivergenceSpec& spec,
                                         SolveMode mode,
                                         const StepSchedule& sched = {},
                                         const FiniteGanOptions& opt = {}) {
  SaddleProblem pb = make_finite_gan_problem(p_d, spec, opt.simplex_projection);
  SolveOptions so = opt.solve;
  so.x0 = pb.project_x(Vector::Constant(p_d.size(), opt.init_d));
  so.lambda0 =
      opt.init_p_g.size() ? opt.init_p_g : uniform_distribution(p_d.size());
  SolveReport report = solve(pb, mode, sched, so);
  FiniteGanRun run;
  run.final = {report.final.x, report.final.lambda};
  run.report = std::move(report);
  return run;
}

}  // namespace pdgan
