#pragma once

// Projected subgradient iterations for concave-convex Lagrangian saddle
// problems
//   max_{x in X} min_{lambda >= 0} L(x, lambda) = f(x) + lambda' F(x),
// with X a closed convex set reached through a projection callback.
//
// Two update modes:
//   primal_dual: one ascent step in x and one descent step in lambda,
//     both evaluated at the current iterate (Jacobi order).
//   dual_driven: x is maximized to (near) optimality at fixed lambda,
//     then lambda takes one step using the fresh maximizer.

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdgan {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Thrown when an iterate or subgradient goes non-finite.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& what, long iteration)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}
  long iteration() const { return iteration_; }

 private:
  long iteration_;
};

struct SaddleProblem {
  Eigen::Index dim_x = 0;
  Eigen::Index dim_lambda = 0;

  std::function<double(const Vector&, const Vector&)> lagrangian;
  std::function<Vector(const Vector&, const Vector&)> grad_x;
  std::function<Vector(const Vector&)> constraints;  // F(x); d/dlambda L = F(x)
  std::function<Vector(const Vector&)> project_x;
  // Optional closed-form argmax_x L(x, lambda); when absent dual_driven
  // falls back to an inner projected-ascent loop.
  std::function<Vector(const Vector&)> argmax_x;
  // Optional override of the nonnegative-orthant dual projection.
  std::function<Vector(const Vector&)> project_lambda;

  Vector project_dual(const Vector& lambda) const {
    return project_lambda ? project_lambda(lambda) : lambda.cwiseMax(0.0).eval();
  }
};

// alpha(t) = a / (b + t); square-summable but not summable, which is what
// the convergence argument needs.
struct StepSchedule {
  double a = 1.0;
  double b = 10.0;
  double at(long t) const { return a / (b + static_cast<double>(t)); }
};

struct SaddleIterate {
  Vector x;
  Vector lambda;
  long t = 0;
};

struct SolveOptions {
  long max_iters = 1000000;
  // Converged once both |x'-x| and |lambda'-lambda| stay below this for
  // 100 consecutive iterations.
  double movement_tol = 1e-10;
  long quiet_run = 100;
  long stride = 0;  // trajectory sampling; 0 = max(1, max_iters / 1000)
  long inner_steps = 50;
  double inner_step_size = 0.1;
  double inner_tol = 1e-12;
  Vector x0;       // empty = project(zeros)
  Vector lambda0;  // empty = zeros
  // Optional early exit, checked at trajectory-recording events only so
  // an expensive predicate stays off the per-iteration path.
  std::function<bool(const SaddleIterate&)> stop_when;
};

struct TrajectoryPoint {
  long t = 0;
  Vector x;
  Vector lambda;
  double lagrangian = 0.0;
};

struct SolveReport {
  SaddleIterate final;
  long iterations = 0;
  bool converged = false;
  std::vector<TrajectoryPoint> trajectory;
};

inline double lagrangian_value(const SaddleProblem& pb, const Vector& x,
                               const Vector& lambda) {
  if (x.size() != pb.dim_x || lambda.size() != pb.dim_lambda)
    throw std::invalid_argument("lagrangian_value: dimension mismatch");
  return pb.lagrangian(x, lambda);
}

namespace detail {

inline void check_finite(const Vector& v, const char* what, long t) {
  if (!v.allFinite()) throw numeric_error(std::string(what) + " non-finite", t);
}

inline Vector inner_maximize(const SaddleProblem& pb, Vector x,
                             const Vector& lambda, const SolveOptions& opt,
                             long t) {
  if (pb.argmax_x) {
    Vector xs = pb.project_x(pb.argmax_x(lambda));
    check_finite(xs, "argmax_x", t);
    return xs;
  }
  double prev = pb.lagrangian(x, lambda);
  for (long s = 0; s < opt.inner_steps; ++s) {
    Vector g = pb.grad_x(x, lambda);
    check_finite(g, "inner grad_x", t);
    x = pb.project_x(x + opt.inner_step_size * g);
    double cur = pb.lagrangian(x, lambda);
    if (!std::isfinite(cur)) throw numeric_error("inner objective non-finite", t);
    if (std::abs(cur - prev) < opt.inner_tol) break;
    prev = cur;
  }
  return x;
}

}  // namespace detail

// Jacobi-ordered simultaneous step: both updates read the iterate at time t.
inline SaddleIterate primal_dual_step(const SaddleProblem& pb,
                                      const SaddleIterate& it,
                                      const StepSchedule& sched) {
  const double alpha = sched.at(it.t);
  Vector gx = pb.grad_x(it.x, it.lambda);
  Vector fx = pb.constraints(it.x);
  detail::check_finite(gx, "grad_x", it.t);
  detail::check_finite(fx, "constraints", it.t);
  SaddleIterate next;
  next.x = pb.project_x(it.x + alpha * gx);
  next.lambda = pb.project_dual(it.lambda - alpha * fx);
  next.t = it.t + 1;
  detail::check_finite(next.x, "x", it.t);
  detail::check_finite(next.lambda, "lambda", it.t);
  return next;
}

// Full inner maximization over x, then a dual step at the new x.
inline SaddleIterate dual_driven_step(const SaddleProblem& pb,
                                      const SaddleIterate& it,
                                      const StepSchedule& sched,
                                      const SolveOptions& opt = {}) {
  const double alpha = sched.at(it.t);
  SaddleIterate next;
  next.x = detail::inner_maximize(pb, it.x, it.lambda, opt, it.t);
  Vector fx = pb.constraints(next.x);
  detail::check_finite(fx, "constraints", it.t);
  next.lambda = pb.project_dual(it.lambda - alpha * fx);
  next.t = it.t + 1;
  detail::check_finite(next.lambda, "lambda", it.t);
  return next;
}

enum class SolveMode { primal_dual, dual_driven };

inline SolveMode solve_mode_from_name(const std::string& name) {
  if (name == "primal_dual") return SolveMode::primal_dual;
  if (name == "dual_driven") return SolveMode::dual_driven;
  throw std::invalid_argument("unknown solve mode: " + name);
}

inline SolveReport solve(const SaddleProblem& pb, SolveMode mode,
                         const StepSchedule& sched, const SolveOptions& opt = {}) {
  if (pb.dim_x <= 0 || pb.dim_lambda <= 0)
    throw std::invalid_argument("solve: problem dimensions must be positive");

  SaddleIterate it;
  it.x = opt.x0.size() ? opt.x0 : pb.project_x(Vector::Zero(pb.dim_x));
  it.lambda = opt.lambda0.size() ? opt.lambda0 : Vector::Zero(pb.dim_lambda);
  it.t = 0;
  if (it.x.size() != pb.dim_x || it.lambda.size() != pb.dim_lambda)
    throw std::invalid_argument("solve: bad initial iterate dimensions");

  const long stride = opt.stride > 0 ? opt.stride : std::max<long>(1, opt.max_iters / 1000);

  SolveReport report;
  auto record = [&](const SaddleIterate& p) {
    report.trajectory.push_back(
        {p.t, p.x, p.lambda, pb.lagrangian(p.x, p.lambda)});
  };
  record(it);

  long quiet = 0;
  for (long t = 0; t < opt.max_iters; ++t) {
    SaddleIterate next = mode == SolveMode::primal_dual
                             ? primal_dual_step(pb, it, sched)
                             : dual_driven_step(pb, it, sched, opt);
    const double move =
        std::max((next.x - it.x).norm(), (next.lambda - it.lambda).norm());
    it = std::move(next);
    if (it.t % stride == 0) {
      record(it);
      if (opt.stop_when && opt.stop_when(it)) {
        report.converged = true;
        break;
      }
    }
    quiet = move < opt.movement_tol ? quiet + 1 : 0;
    if (quiet >= opt.quiet_run) {
      report.converged = true;
      break;
    }
  }
  if (report.trajectory.back().t != it.t) record(it);
  report.final = it;
  report.iterations = it.t;
  return report;
}

}  // namespace pdgan
