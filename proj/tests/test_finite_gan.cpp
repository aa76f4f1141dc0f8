#include <pdgan/finite_gan.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace pdgan;
using Catch::Approx;

namespace {

FiniteGanState random_state(const DivergenceSpec& spec, Eigen::Index n,
                            std::mt19937_64& rng) {
  const double lo = std::max(spec.domain_lo, 0.1);
  const double hi = std::min(spec.domain_hi, 3.0);
  std::uniform_real_distribution<double> ud(lo, hi);
  std::uniform_real_distribution<double> up(0.01, 0.5);
  FiniteGanState s;
  s.d.resize(n);
  s.p_g.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.d[i] = ud(rng);
    s.p_g[i] = up(rng);
  }
  return s;
}

}  // namespace

TEST_CASE("distribution helpers") {
  CHECK_THROWS_AS(validate_distribution(Vector()), std::invalid_argument);
  Vector neg(2);
  neg << 1.2, -0.2;
  CHECK_THROWS_AS(validate_distribution(neg), std::invalid_argument);
  Vector off(2);
  off << 0.6, 0.6;
  CHECK_THROWS_AS(validate_distribution(off), std::invalid_argument);

  CHECK_NOTHROW(validate_distribution(uniform_distribution(7)));

  std::mt19937_64 rng(1);
  for (int k = 0; k < 10; ++k) {
    Vector p = random_distribution(13, rng);
    CHECK_NOTHROW(validate_distribution(p));
    CHECK(p.minCoeff() > 0.0);
  }
}

TEST_CASE("simplex projection") {
  Vector v(2);
  v << 1.2, 0.3;
  Vector p = project_simplex(v);
  CHECK(p[0] == Approx(0.95));
  CHECK(p[1] == Approx(0.05));

  Vector w(3);
  w << -1.0, -2.0, 4.0;
  p = project_simplex(w);
  CHECK(p.sum() == Approx(1.0));
  CHECK(p[2] == Approx(1.0));
  CHECK(p[0] == 0.0);

  // already on the simplex: unchanged
  Vector u = uniform_distribution(4);
  CHECK((project_simplex(u) - u).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("lagrangian gradients match finite differences") {
  std::mt19937_64 rng(23);
  const double h = 1e-6;
  for (const auto& name : divergence_names()) {
    DivergenceSpec spec = make_divergence(name);
    for (int inst = 0; inst < 5; ++inst) {
      const Eigen::Index n = 4;
      Vector p_d = random_distribution(n, rng);
      FiniteGanState s = random_state(spec, n, rng);

      Vector gd = grad_d(p_d, s, spec);
      Vector gp = grad_pg(s, spec);
      for (Eigen::Index i = 0; i < n; ++i) {
        FiniteGanState up = s, dn = s;
        up.d[i] += h;
        dn.d[i] -= h;
        double fd = (gan_lagrangian(p_d, up, spec) -
                     gan_lagrangian(p_d, dn, spec)) /
                    (2.0 * h);
        CHECK(gd[i] == Approx(fd).epsilon(1e-5).margin(1e-7));

        up = s;
        dn = s;
        up.p_g[i] += h;
        dn.p_g[i] -= h;
        fd = (gan_lagrangian(p_d, up, spec) - gan_lagrangian(p_d, dn, spec)) /
             (2.0 * h);
        CHECK(gp[i] == Approx(fd).epsilon(1e-5).margin(1e-7));
      }
    }
  }
}

TEST_CASE("lagrangian rejects out-of-domain discriminators") {
  DivergenceSpec js = make_divergence(DivergenceId::jensen_shannon);
  FiniteGanState s;
  s.d = Vector::Constant(2, 0.99);  // beyond the [0.05, 0.95] box
  s.p_g = uniform_distribution(2);
  CHECK_THROWS_AS(gan_lagrangian(uniform_distribution(2), s, js),
                  std::invalid_argument);
}

TEST_CASE("function-space runs reach the matching saddle") {
  DivergenceSpec js = make_divergence(DivergenceId::jensen_shannon);
  std::mt19937_64 rng(41);
  for (SolveMode mode : {SolveMode::primal_dual, SolveMode::dual_driven}) {
    Vector p_d = random_distribution(6, rng);
    FiniteGanOptions opt;
    opt.solve.max_iters = 1000000;
    opt.solve.stride = 500;
    opt.solve.stop_when = [&](const SaddleIterate& it) {
      return (it.lambda - p_d).cwiseAbs().maxCoeff() < 5e-3 &&
             (it.x.array() - 0.5).abs().maxCoeff() < 5e-3;
    };
    FiniteGanRun run = train_function_space(p_d, js, mode, StepSchedule{}, opt);
    INFO("mode " << (mode == SolveMode::primal_dual ? "pd" : "dd"));
    CHECK((run.final.p_g - p_d).cwiseAbs().maxCoeff() < 1e-2);
    CHECK((run.final.d.array() - 0.5).abs().maxCoeff() < 1e-2);
  }
}

TEST_CASE("generated mass converges for a non-logarithmic divergence too") {
  DivergenceSpec quad = make_divergence(DivergenceId::quadratic_other);
  std::mt19937_64 rng(43);
  Vector p_d = random_distribution(5, rng);
  FiniteGanOptions opt;
  opt.solve.max_iters = 500000;
  opt.solve.stride = 500;
  opt.solve.stop_when = [&](const SaddleIterate& it) {
    return (it.lambda - p_d).cwiseAbs().maxCoeff() < 5e-3;
  };
  FiniteGanRun run = train_function_space(p_d, quad, SolveMode::dual_driven,
                                          StepSchedule{}, opt);
  CHECK((run.final.p_g - p_d).cwiseAbs().maxCoeff() < 1e-2);
  // saddle discriminator for this entry sits at the f1 root, d = 2
  CHECK((run.final.d.array() - 2.0).abs().maxCoeff() < 2e-2);
}

TEST_CASE("simplex projection keeps p_g a distribution throughout") {
  DivergenceSpec js = make_divergence(DivergenceId::jensen_shannon);
  std::mt19937_64 rng(47);
  Vector p_d = random_distribution(4, rng);
  FiniteGanOptions opt;
  opt.simplex_projection = true;
  opt.solve.max_iters = 20000;
  opt.solve.stride = 100;
  FiniteGanRun run = train_function_space(p_d, js, SolveMode::primal_dual,
                                          StepSchedule{}, opt);
  for (const auto& p : run.report.trajectory) {
    CHECK(p.lambda.sum() == Approx(1.0).margin(1e-9));
    CHECK(p.lambda.minCoeff() >= 0.0);
  }
  CHECK((run.final.p_g - p_d).cwiseAbs().maxCoeff() < 5e-2);
}

TEST_CASE("initial iterate honors the options") {
  DivergenceSpec js = make_divergence(DivergenceId::jensen_shannon);
  Vector p_d = uniform_distribution(3);
  FiniteGanOptions opt;
  opt.init_d = 0.9;
  opt.init_p_g = Vector::Constant(3, 0.2);
  opt.solve.max_iters = 0;
  FiniteGanRun run = train_function_space(p_d, js, SolveMode::primal_dual,
                                          StepSchedule{}, opt);
  CHECK((run.final.d.array() == 0.9).all());
  CHECK((run.final.p_g.array() == 0.2).all());
}
