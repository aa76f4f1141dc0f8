// Command-line front end: saddle solves, function-space runs, neural
// experiments, and bit-exact replay of stored manifests.
//
// Option resolution order: built-in defaults, then --config JSON, then
// explicit flags.

#include <CLI11.hpp>

#include <pdgan/cli.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

namespace {

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

std::string out_root() {
  if (const char* env = std::getenv("PDGAN_OUT")) return env;
  return "runs";
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  size_t at = 0;
  while (at < s.size()) {
    size_t comma = s.find(',', at);
    if (comma == std::string::npos) comma = s.size();
    seeds.push_back(std::stoull(s.substr(at, comma - at)));
    at = comma + 1;
  }
  if (seeds.empty()) throw std::runtime_error("empty seed list");
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"primal-dual divergence games: exact solvers and neural trainers"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "run a built-in saddle problem");
  pdgan::SolveCli scli;
  std::string s_config, s_out;
  bool s_plots = false;
  auto* s_problem = solve_cmd->add_option("--problem", scli.problem,
                                          "qp1d | inactive | qp2d");
  auto* s_mode =
      solve_cmd->add_option("--mode", scli.mode, "primal_dual | dual_driven");
  auto* s_iters = solve_cmd->add_option("--max-iters", scli.max_iters);
  auto* s_tol = solve_cmd->add_option("--tol", scli.movement_tol);
  auto* s_a = solve_cmd->add_option("--step-a", scli.step_a);
  auto* s_b = solve_cmd->add_option("--step-b", scli.step_b);
  auto* s_stride = solve_cmd->add_option("--stride", scli.stride);
  solve_cmd->add_option("--config", s_config, "JSON config file");
  solve_cmd->add_option("--out", s_out, "output directory");
  solve_cmd->add_flag("--plots", s_plots, "write SVG plots");

  // finite-gan
  auto* fg_cmd = app.add_subcommand("finite-gan",
                                    "function-space game on a finite sample space");
  pdgan::FiniteGanCli fcli;
  std::string f_config, f_out;
  bool f_plots = false;
  auto* f_div = fg_cmd->add_option("--divergence", fcli.divergence);
  auto* f_mode = fg_cmd->add_option("--mode", fcli.mode);
  auto* f_n = fg_cmd->add_option("--n", fcli.n, "sample-space size");
  auto* f_seed = fg_cmd->add_option("--seed", fcli.seed);
  auto* f_iters = fg_cmd->add_option("--max-iters", fcli.max_iters);
  auto* f_tol = fg_cmd->add_option("--tol", fcli.movement_tol);
  auto* f_a = fg_cmd->add_option("--step-a", fcli.step_a);
  auto* f_b = fg_cmd->add_option("--step-b", fcli.step_b);
  auto* f_stride = fg_cmd->add_option("--stride", fcli.stride);
  auto* f_simplex = fg_cmd->add_flag("--simplex", fcli.simplex,
                                     "project p_g onto the simplex");
  auto* f_eps = fg_cmd->add_option("--epsilon-wgan", fcli.epsilon_wgan);
  auto* f_box = fg_cmd->add_option("--box-epsilon", fcli.box_epsilon);
  fg_cmd->add_option("--config", f_config, "JSON config file");
  fg_cmd->add_option("--out", f_out, "output directory");
  fg_cmd->add_flag("--plots", f_plots, "write SVG plots");

  // experiment
  auto* ex_cmd = app.add_subcommand("experiment", "neural training benchmark");
  std::string e_name = "toy1d", e_method = "matching";
  std::uint64_t e_seed = 1;
  std::string e_seeds, e_config, e_out;
  bool e_plots = false;
  long e_iterations = 0, e_stride = 0, e_k0 = 0, e_m1 = 0, e_m2 = 0;
  long e_warmup = -1;
  double e_alpha = -1.0, e_lr_disc = -1.0, e_lr_gen = -1.0, e_eps_gen = -1.0;
  auto* e_name_o = ex_cmd->add_option("--name", e_name, "toy1d | gauss8");
  auto* e_method_o =
      ex_cmd->add_option("--method", e_method, "matching | gan | wgan");
  auto* e_seed_o = ex_cmd->add_option("--seed", e_seed);
  ex_cmd->add_option("--seeds", e_seeds, "comma-separated seed sweep");
  auto* e_iters_o = ex_cmd->add_option("--iterations", e_iterations);
  auto* e_stride_o = ex_cmd->add_option("--stride", e_stride, "metric stride");
  auto* e_alpha_o = ex_cmd->add_option("--alpha", e_alpha, "target step size");
  auto* e_k0_o = ex_cmd->add_option("--k0", e_k0, "discriminator steps per iter");
  auto* e_m1_o = ex_cmd->add_option("--m1", e_m1, "data minibatch");
  auto* e_m2_o = ex_cmd->add_option("--m2", e_m2, "noise minibatch");
  auto* e_lrd_o = ex_cmd->add_option("--lr-disc", e_lr_disc);
  auto* e_lrg_o = ex_cmd->add_option("--lr-gen", e_lr_gen);
  auto* e_epsg_o = ex_cmd->add_option("--eps-hat-gen", e_eps_gen,
                                      "adam/rmsprop denominator offset");
  auto* e_warm_o = ex_cmd->add_option("--disc-warmup", e_warmup,
                                      "discriminator-only steps before iter 0");
  bool e_collapse = false;
  auto* e_coll_o = ex_cmd->add_flag("--disc-collapse,!--no-disc-collapse",
                                    e_collapse,
                                    "start D at the collapsed two-plateau state");
  ex_cmd->add_option("--config", e_config, "JSON config file");
  ex_cmd->add_option("--out", e_out, "output directory");
  ex_cmd->add_flag("--plots", e_plots, "write SVG plots");

  // replay
  auto* rp_cmd = app.add_subcommand("replay", "re-run a manifest and verify outputs");
  std::string r_manifest, r_out;
  rp_cmd->add_option("--manifest", r_manifest, "manifest.json path")->required();
  rp_cmd->add_option("--out", r_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) {
      if (!s_config.empty()) {
        pdgan::SolveCli base = pdgan::SolveCli::from_json(load_config(s_config));
        if (!*s_problem) scli.problem = base.problem;
        if (!*s_mode) scli.mode = base.mode;
        if (!*s_iters) scli.max_iters = base.max_iters;
        if (!*s_tol) scli.movement_tol = base.movement_tol;
        if (!*s_a) scli.step_a = base.step_a;
        if (!*s_b) scli.step_b = base.step_b;
        if (!*s_stride) scli.stride = base.stride;
      }
      std::string out = !s_out.empty()
                            ? s_out
                            : out_root() + "/solve-" + scli.problem + "-" + scli.mode;
      pdgan::run_solve(scli, out, s_plots);
      const auto& prob = pdgan::find_problem(scli.problem);
      std::printf("solve %s (%s): wrote %s\n", scli.problem.c_str(),
                  scli.mode.c_str(), out.c_str());
      std::printf("  %s\n", prob.description.c_str());
      return 0;
    }

    if (fg_cmd->parsed()) {
      if (!f_config.empty()) {
        pdgan::FiniteGanCli base =
            pdgan::FiniteGanCli::from_json(load_config(f_config));
        if (!*f_div) fcli.divergence = base.divergence;
        if (!*f_mode) fcli.mode = base.mode;
        if (!*f_n) fcli.n = base.n;
        if (!*f_seed) fcli.seed = base.seed;
        if (!*f_iters) fcli.max_iters = base.max_iters;
        if (!*f_tol) fcli.movement_tol = base.movement_tol;
        if (!*f_a) fcli.step_a = base.step_a;
        if (!*f_b) fcli.step_b = base.step_b;
        if (!*f_stride) fcli.stride = base.stride;
        if (!*f_simplex) fcli.simplex = base.simplex;
        if (!*f_eps) fcli.epsilon_wgan = base.epsilon_wgan;
        if (!*f_box) fcli.box_epsilon = base.box_epsilon;
        fcli.p_d = base.p_d;
      }
      std::string out = !f_out.empty()
                            ? f_out
                            : out_root() + "/finite-gan-" + fcli.divergence + "-n" +
                                  std::to_string(fcli.n) + "-" + fcli.mode +
                                  "-seed" + std::to_string(fcli.seed);
      pdgan::run_finite_gan(fcli, out, f_plots);
      std::printf("finite-gan %s n=%ld (%s): wrote %s\n", fcli.divergence.c_str(),
                  fcli.n, fcli.mode.c_str(), out.c_str());
      return 0;
    }

    if (ex_cmd->parsed()) {
      nlohmann::json cfg;
      if (!e_config.empty()) cfg = load_config(e_config);
      if (!*e_name_o && cfg.contains("name")) e_name = cfg["name"];
      if (!*e_method_o && cfg.contains("method")) e_method = cfg["method"];
      if (!*e_seed_o && cfg.contains("seed"))
        e_seed = cfg["seed"].get<std::uint64_t>();

      std::vector<std::uint64_t> seeds = {e_seed};
      if (!e_seeds.empty()) seeds = parse_seed_list(e_seeds);
      else if (cfg.contains("seeds"))
        seeds = cfg["seeds"].get<std::vector<std::uint64_t>>();

      const pdgan::Method method = pdgan::method_from_name(e_method);
      const bool multi = seeds.size() > 1;
      std::string out = !e_out.empty()
                            ? e_out
                            : out_root() + "/experiment-" + e_name + "-" + e_method +
                                  (multi ? "" : "-seed" + std::to_string(seeds[0]));

      for (std::uint64_t seed : seeds) {
        pdgan::ExperimentCli ecli;
        ecli.name = e_name;
        ecli.method = e_method;
        ecli.train = e_name == "gauss8" ? pdgan::gauss8_config(method, seed)
                                        : pdgan::toy1d_config(method, seed);
        if (cfg.contains("train"))
          ecli.train = pdgan::train_config_from_json(cfg["train"], ecli.train);
        ecli.train.seed = seed;
        if (*e_iters_o) ecli.train.iterations = e_iterations;
        if (*e_stride_o) ecli.train.metric_stride = e_stride;
        if (*e_alpha_o) ecli.train.alpha_target = e_alpha;
        if (*e_k0_o) ecli.train.k0 = static_cast<int>(e_k0);
        if (*e_m1_o) ecli.train.m1 = static_cast<int>(e_m1);
        if (*e_m2_o) ecli.train.m2 = static_cast<int>(e_m2);
        if (*e_lrd_o) ecli.train.disc_opt.lr = e_lr_disc;
        if (*e_lrg_o) ecli.train.gen_opt.lr = e_lr_gen;
        if (*e_epsg_o) ecli.train.gen_opt.eps_hat = e_eps_gen;
        if (*e_warm_o) ecli.train.disc_warmup_steps = e_warmup;
        if (*e_coll_o) ecli.train.disc_collapse_init = e_collapse;

        std::string run_out =
            multi ? out + "/seed-" + std::to_string(seed) : out;
        pdgan::run_experiment(ecli, run_out, e_plots);
        std::printf("experiment %s/%s seed=%llu: wrote %s\n", e_name.c_str(),
                    e_method.c_str(), static_cast<unsigned long long>(seed),
                    run_out.c_str());
      }
      return 0;
    }

    if (rp_cmd->parsed()) {
      pdgan::ReplayResult res = pdgan::replay_manifest(r_manifest, r_out);
      if (res.ok) {
        std::printf("replay ok: outputs reproduce bit for bit\n");
        return 0;
      }
      for (const auto& f : res.mismatches)
        std::fprintf(stderr, "replay mismatch: %s\n", f.c_str());
      return 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
