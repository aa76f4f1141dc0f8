#pragma once

// Small quadratic saddle instances with known solutions, shared by the
// solver tests and the `solve` CLI subcommand.

#include <pdgan/saddle.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace pdgan {

struct AnalyticSaddle {
  std::string name;
  std::string description;
  SaddleProblem problem;
  Vector x_star;
  Vector lambda_star;
};

namespace detail {

inline Vector box10(const Vector& v) {
  return v.cwiseMax(-10.0).cwiseMin(10.0);
}

}  // namespace detail

inline const std::vector<AnalyticSaddle>& builtin_problems() {
  static const std::vector<AnalyticSaddle> problems = [] {
    std::vector<AnalyticSaddle> out;

    {  // max -(x-1)^2  s.t.  0.5 - x >= 0; binding constraint.
      AnalyticSaddle p;
      p.name = "qp1d";
      p.description = "max -(x-1)^2 s.t. 0.5-x>=0 on [-10,10]";
      p.problem.dim_x = 1;
      p.problem.dim_lambda = 1;
      p.problem.lagrangian = [](const Vector& x, const Vector& l) {
        double e = x[0] - 1.0;
        return -e * e + l[0] * (0.5 - x[0]);
      };
      p.problem.grad_x = [](const Vector& x, const Vector& l) {
        Vector g(1);
        g[0] = -2.0 * (x[0] - 1.0) - l[0];
        return g;
      };
      p.problem.constraints = [](const Vector& x) {
        Vector f(1);
        f[0] = 0.5 - x[0];
        return f;
      };
      p.problem.project_x = detail::box10;
      p.problem.argmax_x = [](const Vector& l) {
        Vector x(1);
        x[0] = 1.0 - 0.5 * l[0];
        return x;
      };
      p.x_star = Vector::Constant(1, 0.5);
      p.lambda_star = Vector::Constant(1, 1.0);
      out.push_back(std::move(p));
    }

    {  // max -x^2  s.t.  x + 5 >= 0; constraint inactive at the optimum.
      AnalyticSaddle p;
      p.name = "inactive";
      p.description = "max -x^2 s.t. x+5>=0 on [-10,10]";
      p.problem.dim_x = 1;
      p.problem.dim_lambda = 1;
      p.problem.lagrangian = [](const Vector& x, const Vector& l) {
        return -x[0] * x[0] + l[0] * (x[0] + 5.0);
      };
      p.problem.grad_x = [](const Vector& x, const Vector& l) {
        Vector g(1);
        g[0] = -2.0 * x[0] + l[0];
        return g;
      };
      p.problem.constraints = [](const Vector& x) {
        Vector f(1);
        f[0] = x[0] + 5.0;
        return f;
      };
      p.problem.project_x = detail::box10;
      p.problem.argmax_x = [](const Vector& l) {
        Vector x(1);
        x[0] = 0.5 * l[0];
        return x;
      };
      p.x_star = Vector::Zero(1);
      p.lambda_star = Vector::Zero(1);
      out.push_back(std::move(p));
    }

    {  // max -|x-(1,1)|^2  s.t.  1 - x1 - x2 >= 0; binding, symmetric.
      AnalyticSaddle p;
      p.name = "qp2d";
      p.description = "max -|x-(1,1)|^2 s.t. 1-x1-x2>=0 on [-10,10]^2";
      p.problem.dim_x = 2;
      p.problem.dim_lambda = 1;
      p.problem.lagrangian = [](const Vector& x, const Vector& l) {
        Vector e = x - Vector::Constant(2, 1.0);
        return -e.squaredNorm() + l[0] * (1.0 - x.sum());
      };
      p.problem.grad_x = [](const Vector& x, const Vector& l) {
        return (-2.0 * (x - Vector::Constant(2, 1.0)) -
                Vector::Constant(2, l[0]))
            .eval();
      };
      p.problem.constraints = [](const Vector& x) {
        Vector f(1);
        f[0] = 1.0 - x.sum();
        return f;
      };
      p.problem.project_x = detail::box10;
      p.problem.argmax_x = [](const Vector& l) {
        return Vector::Constant(2, 1.0 - 0.5 * l[0]).eval();
      };
      p.x_star = Vector::Constant(2, 0.5);
      p.lambda_star = Vector::Constant(1, 1.0);
      out.push_back(std::move(p));
    }

    return out;
  }();
  return problems;
}

inline const AnalyticSaddle& find_problem(const std::string& name) {
  for (const auto& p : builtin_problems())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown problem: " + name);
}

}  // namespace pdgan
