#pragma once

// JSON round-tripping for run configurations.  Manifests store the fully
// resolved config, so a replay reconstructs the run without consulting
// defaults that may since have changed.

#include <pdgan/experiment.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace pdgan {

inline const char* optimizer_kind_name(OptimizerConfig::Kind k) {
  switch (k) {
    case OptimizerConfig::Kind::sgd: return "sgd";
    case OptimizerConfig::Kind::adam: return "adam";
    case OptimizerConfig::Kind::rmsprop: return "rmsprop";
  }
  return "?";
}

inline nlohmann::json to_json(const OptimizerConfig& c) {
  return {{"kind", optimizer_kind_name(c.kind)},
          {"lr", c.lr},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"decay", c.decay},
          {"momentum", c.momentum},
          {"eps_hat", c.eps_hat}};
}

inline OptimizerConfig optimizer_from_json(const nlohmann::json& j) {
  OptimizerConfig c;
  c.kind = optimizer_kind_from_name(j.at("kind").get<std::string>());
  c.lr = j.value("lr", c.lr);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.decay = j.value("decay", c.decay);
  c.momentum = j.value("momentum", c.momentum);
  c.eps_hat = j.value("eps_hat", c.eps_hat);
  return c;
}

inline const char* bandwidth_kind_name(BandwidthSchedule::Kind k) {
  switch (k) {
    case BandwidthSchedule::Kind::constant: return "constant";
    case BandwidthSchedule::Kind::step_change: return "step_change";
    case BandwidthSchedule::Kind::geometric_decay: return "geometric_decay";
  }
  return "?";
}

inline BandwidthSchedule::Kind bandwidth_kind_from_name(const std::string& s) {
  if (s == "constant") return BandwidthSchedule::Kind::constant;
  if (s == "step_change") return BandwidthSchedule::Kind::step_change;
  if (s == "geometric_decay") return BandwidthSchedule::Kind::geometric_decay;
  throw std::invalid_argument("unknown bandwidth kind: " + s);
}

inline nlohmann::json to_json(const BandwidthSchedule& b) {
  return {{"kind", bandwidth_kind_name(b.kind)},
          {"initial", b.initial},
          {"value_is_variance", b.value_is_variance},
          {"after", b.after},
          {"change_at", b.change_at},
          {"base", b.base},
          {"period", b.period}};
}

inline BandwidthSchedule bandwidth_from_json(const nlohmann::json& j) {
  BandwidthSchedule b;
  b.kind = bandwidth_kind_from_name(j.at("kind").get<std::string>());
  b.initial = j.value("initial", b.initial);
  b.value_is_variance = j.value("value_is_variance", b.value_is_variance);
  b.after = j.value("after", b.after);
  b.change_at = j.value("change_at", b.change_at);
  b.base = j.value("base", b.base);
  b.period = j.value("period", b.period);
  return b;
}

inline nlohmann::json to_json(const ClipSpec& c) {
  return {{"enabled", c.enabled}, {"lo", c.lo}, {"hi", c.hi}};
}

inline ClipSpec clip_from_json(const nlohmann::json& j) {
  ClipSpec c;
  c.enabled = j.value("enabled", c.enabled);
  c.lo = j.value("lo", c.lo);
  c.hi = j.value("hi", c.hi);
  return c;
}

inline nlohmann::json to_json(const TrainConfig& c) {
  std::vector<std::string> disc_acts, gen_acts;
  for (auto a : c.disc_acts) disc_acts.push_back(activation_name(a));
  for (auto a : c.gen_acts) gen_acts.push_back(activation_name(a));
  return {{"divergence", c.divergence},
          {"epsilon_wgan", c.epsilon_wgan},
          {"box_epsilon", c.box_epsilon},
          {"k0", c.k0},
          {"m1", c.m1},
          {"m2", c.m2},
          {"alpha_target", c.alpha_target},
          {"matching_term", c.matching_term},
          {"bandwidth", to_json(c.bandwidth)},
          {"disc_opt", to_json(c.disc_opt)},
          {"gen_opt", to_json(c.gen_opt)},
          {"disc_clip", to_json(c.disc_clip)},
          {"iterations", c.iterations},
          {"seed", c.seed},
          {"metric_stride", c.metric_stride},
          {"disc_widths", std::vector<long>(c.disc_widths.begin(), c.disc_widths.end())},
          {"gen_widths", std::vector<long>(c.gen_widths.begin(), c.gen_widths.end())},
          {"disc_acts", disc_acts},
          {"gen_acts", gen_acts},
          {"pretrain", c.pretrain},
          {"pretrain_steps", c.pretrain_steps},
          {"pretrain_batch", c.pretrain_batch},
          {"pretrain_opt", to_json(c.pretrain_opt)},
          {"pretrain_tol_mean", c.pretrain_tol_mean},
          {"pretrain_tol_std", c.pretrain_tol_std},
          {"disc_warmup_steps", c.disc_warmup_steps},
          {"disc_collapse_init", c.disc_collapse_init},
          {"collapse_kink_lo", c.collapse_kink_lo},
          {"collapse_kink_hi", c.collapse_kink_hi},
          {"collapse_low", c.collapse_low},
          {"collapse_high", c.collapse_high}};
}

// Fields absent from j keep the values in base.
inline TrainConfig train_config_from_json(const nlohmann::json& j,
                                          TrainConfig c = {}) {
  c.divergence = j.value("divergence", c.divergence);
  c.epsilon_wgan = j.value("epsilon_wgan", c.epsilon_wgan);
  c.box_epsilon = j.value("box_epsilon", c.box_epsilon);
  c.k0 = j.value("k0", c.k0);
  c.m1 = j.value("m1", c.m1);
  c.m2 = j.value("m2", c.m2);
  c.alpha_target = j.value("alpha_target", c.alpha_target);
  c.matching_term = j.value("matching_term", c.matching_term);
  if (j.contains("bandwidth")) c.bandwidth = bandwidth_from_json(j.at("bandwidth"));
  if (j.contains("disc_opt")) c.disc_opt = optimizer_from_json(j.at("disc_opt"));
  if (j.contains("gen_opt")) c.gen_opt = optimizer_from_json(j.at("gen_opt"));
  if (j.contains("disc_clip")) c.disc_clip = clip_from_json(j.at("disc_clip"));
  c.iterations = j.value("iterations", c.iterations);
  c.seed = j.value("seed", c.seed);
  c.metric_stride = j.value("metric_stride", c.metric_stride);
  if (j.contains("disc_widths")) {
    c.disc_widths.clear();
    for (long w : j.at("disc_widths").get<std::vector<long>>())
      c.disc_widths.push_back(w);
  }
  if (j.contains("gen_widths")) {
    c.gen_widths.clear();
    for (long w : j.at("gen_widths").get<std::vector<long>>())
      c.gen_widths.push_back(w);
  }
  if (j.contains("disc_acts")) {
    c.disc_acts.clear();
    for (const auto& s : j.at("disc_acts").get<std::vector<std::string>>())
      c.disc_acts.push_back(activation_from_name(s));
  }
  if (j.contains("gen_acts")) {
    c.gen_acts.clear();
    for (const auto& s : j.at("gen_acts").get<std::vector<std::string>>())
      c.gen_acts.push_back(activation_from_name(s));
  }
  c.pretrain = j.value("pretrain", c.pretrain);
  c.pretrain_steps = j.value("pretrain_steps", c.pretrain_steps);
  c.pretrain_batch = j.value("pretrain_batch", c.pretrain_batch);
  if (j.contains("pretrain_opt"))
    c.pretrain_opt = optimizer_from_json(j.at("pretrain_opt"));
  c.pretrain_tol_mean = j.value("pretrain_tol_mean", c.pretrain_tol_mean);
  c.pretrain_tol_std = j.value("pretrain_tol_std", c.pretrain_tol_std);
  c.disc_warmup_steps = j.value("disc_warmup_steps", c.disc_warmup_steps);
  c.disc_collapse_init = j.value("disc_collapse_init", c.disc_collapse_init);
  c.collapse_kink_lo = j.value("collapse_kink_lo", c.collapse_kink_lo);
  c.collapse_kink_hi = j.value("collapse_kink_hi", c.collapse_kink_hi);
  c.collapse_low = j.value("collapse_low", c.collapse_low);
  c.collapse_high = j.value("collapse_high", c.collapse_high);
  return c;
}

}  // namespace pdgan
