#include <pdgan/divergence.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace pdgan;
using Catch::Approx;

namespace {

double fd_deriv(const std::function<double(double)>& f, double x,
                double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("name round trip") {
  for (const auto& name : divergence_names()) {
    DivergenceSpec s = make_divergence(name);
    CHECK(s.name == name);
  }
  CHECK_THROWS_AS(make_divergence("nope"), std::invalid_argument);
}

TEST_CASE("derivatives match finite differences") {
  std::mt19937_64 rng(3);
  for (const auto& name : divergence_names()) {
    DivergenceSpec s = make_divergence(name);
    // probe strictly inside the domain, away from log blowups
    const double lo = std::max(s.domain_lo, 0.05);
    const double hi = std::min(s.domain_hi, 20.0);
    std::uniform_real_distribution<double> u(lo, hi);
    for (int k = 0; k < 25; ++k) {
      const double d = u(rng);
      CHECK(s.f0_deriv(d) == Approx(fd_deriv(s.f0, d)).margin(1e-5));
      CHECK(s.f1_deriv(d) == Approx(fd_deriv(s.f1, d)).margin(1e-5));
    }
  }
}

TEST_CASE("closed-form maximizer satisfies stationarity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (const auto& name : divergence_names()) {
    DivergenceSpec s = make_divergence(name);
    for (int k = 0; k < 50; ++k) {
      const double pd = u(rng), pg = u(rng);
      const double d = s.d_star_raw(pd, pg);
      if (!s.in_domain(d)) continue;  // boundary case, checked elsewhere
      const double slope = pd * s.f0_deriv(d) + pg * s.f1_deriv(d);
      CHECK(std::abs(slope) < 1e-9);
    }
  }
}

TEST_CASE("pointwise objective is concave along the domain") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (const auto& name : divergence_names()) {
    DivergenceSpec s = make_divergence(name);
    const double pd = u(rng), pg = u(rng);
    auto value = [&](double d) { return pd * s.f0(d) + pg * s.f1(d); };
    const double lo = std::max(s.domain_lo, 0.01);
    const double hi = std::min(s.domain_hi, 10.0);
    double prev_slope = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 40; ++i) {
      const double d = lo + (hi - lo) * i / 40.0;
      const double slope = fd_deriv(value, d, 1e-5);
      CHECK(slope <= prev_slope + 1e-6);
      prev_slope = slope;
    }
  }
}

TEST_CASE("grid argmax agrees with closed form") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (const auto& name : divergence_names()) {
    DivergenceSpec s = make_divergence(name);
    const double res = 1e-3;
    DiscriminatorGrid grid(s, res);
    for (int k = 0; k < 10; ++k) {
      const double pd = u(rng), pg = u(rng);
      const double dev =
          std::abs(grid.argmax(pd, pg) - optimal_discriminator(s, pd, pg));
      CHECK(dev <= 2.0 * res);
    }
  }
}

TEST_CASE("jensen-shannon specifics") {
  DivergenceSpec js = make_divergence(DivergenceId::jensen_shannon);
  CHECK(js.domain_lo == 0.05);
  CHECK(js.domain_hi == 0.95);
  CHECK(optimal_discriminator(js, 0.3, 0.3) == Approx(0.5));
  // pure data mass: raw optimum 1 gets clamped into the box
  CHECK(optimal_discriminator(js, 0.4, 0.0) == Approx(0.95));
  // no mass at all: midpoint by convention
  CHECK(optimal_discriminator(js, 0.0, 0.0) == Approx(0.5));
  CHECK(js.f1(0.95) == Approx(std::log(0.1)));
  CHECK(js.f1(0.5) == Approx(0.0).margin(1e-15));
}

TEST_CASE("boundary clamping on extreme ratios") {
  DivergenceSpec pearson = make_divergence(DivergenceId::pearson_chi2);
  // 2(pd-pg)/pg = 198 lands beyond the box
  CHECK(optimal_discriminator(pearson, 1.0, 0.01) == Approx(100.0));
  DivergenceSpec wgan = make_divergence(DivergenceId::approx_wgan);
  CHECK(optimal_discriminator(wgan, 0.01, 1.0) == Approx(-100.0));
  // grid argmax must sit on the same boundary
  DiscriminatorGrid grid(pearson, 1e-2);
  CHECK(grid.argmax(1.0, 0.01) == Approx(100.0));
}

TEST_CASE("approx_wgan epsilon is configurable") {
  DivergenceSpec w1 = make_divergence(DivergenceId::approx_wgan, 0.1);
  DivergenceSpec w2 = make_divergence(DivergenceId::approx_wgan, 0.25);
  CHECK(optimal_discriminator(w1, 0.6, 0.3) == Approx(0.3 / (0.2 * 0.6)));
  CHECK(optimal_discriminator(w2, 0.6, 0.3) == Approx(0.3 / (0.5 * 0.6)));
}

TEST_CASE("equal masses give the f1 root") {
  // at p_g = p_d the maximizer zeroes f1, the dual stationarity condition
  for (const auto& name : divergence_names()) {
    DivergenceSpec s = make_divergence(name);
    const double d = optimal_discriminator(s, 0.37, 0.37);
    CHECK(s.f1(d) == Approx(0.0).margin(1e-12));
  }
}
