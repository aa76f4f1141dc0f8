#pragma once

// Resolved per-subcommand configurations.  Flags and JSON config files
// both land here; manifests store the struct verbatim.

#include <pdgan/config_json.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace pdgan {

struct SolveCli {
  std::string problem = "qp1d";
  std::string mode = "primal_dual";
  long max_iters = 1000000;
  double movement_tol = 1e-10;
  double step_a = 1.0;
  double step_b = 10.0;
  long stride = 0;

  nlohmann::json to_json() const {
    return {{"problem", problem},    {"mode", mode},
            {"max_iters", max_iters}, {"movement_tol", movement_tol},
            {"step_a", step_a},      {"step_b", step_b},
            {"stride", stride}};
  }

  static SolveCli from_json(const nlohmann::json& j) {
    SolveCli c;
    c.problem = j.value("problem", c.problem);
    c.mode = j.value("mode", c.mode);
    c.max_iters = j.value("max_iters", c.max_iters);
    c.movement_tol = j.value("movement_tol", c.movement_tol);
    c.step_a = j.value("step_a", c.step_a);
    c.step_b = j.value("step_b", c.step_b);
    c.stride = j.value("stride", c.stride);
    return c;
  }
};

struct FiniteGanCli {
  std::string divergence = "jensen_shannon";
  std::string mode = "primal_dual";
  long n = 10;
  std::uint64_t seed = 1;
  long max_iters = 1000000;
  double movement_tol = 1e-10;
  double step_a = 1.0;
  double step_b = 10.0;
  long stride = 0;
  bool simplex = false;
  double epsilon_wgan = 0.1;
  double box_epsilon = 0.05;
  std::vector<double> p_d;  // explicit data distribution; empty = random

  nlohmann::json to_json() const {
    return {{"divergence", divergence},
            {"mode", mode},
            {"n", n},
            {"seed", seed},
            {"max_iters", max_iters},
            {"movement_tol", movement_tol},
            {"step_a", step_a},
            {"step_b", step_b},
            {"stride", stride},
            {"simplex", simplex},
            {"epsilon_wgan", epsilon_wgan},
            {"box_epsilon", box_epsilon},
            {"p_d", p_d}};
  }

  static FiniteGanCli from_json(const nlohmann::json& j) {
    FiniteGanCli c;
    c.divergence = j.value("divergence", c.divergence);
    c.mode = j.value("mode", c.mode);
    c.n = j.value("n", c.n);
    c.seed = j.value("seed", c.seed);
    c.max_iters = j.value("max_iters", c.max_iters);
    c.movement_tol = j.value("movement_tol", c.movement_tol);
    c.step_a = j.value("step_a", c.step_a);
    c.step_b = j.value("step_b", c.step_b);
    c.stride = j.value("stride", c.stride);
    c.simplex = j.value("simplex", c.simplex);
    c.epsilon_wgan = j.value("epsilon_wgan", c.epsilon_wgan);
    c.box_epsilon = j.value("box_epsilon", c.box_epsilon);
    c.p_d = j.value("p_d", c.p_d);
    return c;
  }
};

struct ExperimentCli {
  std::string name = "toy1d";
  std::string method = "matching";
  TrainConfig train;  // fully resolved

  nlohmann::json to_json() const {
    return {{"name", name},
            {"method", method},
            {"train", pdgan::to_json(train)}};
  }

  static ExperimentCli from_json(const nlohmann::json& j) {
    ExperimentCli c;
    c.name = j.value("name", c.name);
    c.method = j.value("method", c.method);
    if (j.contains("train")) c.train = train_config_from_json(j.at("train"));
    return c;
  }
};

}  // namespace pdgan
