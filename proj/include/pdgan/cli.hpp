#pragma once

// Implementations behind the command-line subcommands.  Each run_*
// writes CSV artifacts plus a manifest.json into its output directory
// and returns the manifest; replay_manifest re-runs a stored manifest
// and verifies the outputs reproduce bit for bit.

#include <pdgan/cli_configs.hpp>
#include <pdgan/csv.hpp>
#include <pdgan/finite_gan.hpp>
#include <pdgan/manifest.hpp>
#include <pdgan/problems.hpp>
#include <pdgan/svg.hpp>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace pdgan {

namespace detail {

inline void finish_manifest(RunManifest& m, const std::string& out_dir,
                            const std::vector<std::string>& files) {
  for (const auto& f : files)
    m.checksums[f] = hex64(fnv1a64_file(out_dir + "/" + f));
  m.save(out_dir + "/manifest.json");
}

}  // namespace detail

inline RunManifest run_solve(const SolveCli& cli, const std::string& out_dir,
                             bool plots = false) {
  std::filesystem::create_directories(out_dir);
  const AnalyticSaddle& prob = find_problem(cli.problem);
  StepSchedule sched{cli.step_a, cli.step_b};
  SolveOptions opt;
  opt.max_iters = cli.max_iters;
  opt.movement_tol = cli.movement_tol;
  opt.stride = cli.stride;
  SolveReport report =
      solve(prob.problem, solve_mode_from_name(cli.mode), sched, opt);

  std::vector<std::string> files;
  {
    std::vector<std::string> header = {"t"};
    for (Eigen::Index i = 0; i < prob.problem.dim_x; ++i)
      header.push_back("x" + std::to_string(i));
    for (Eigen::Index i = 0; i < prob.problem.dim_lambda; ++i)
      header.push_back("lambda" + std::to_string(i));
    header.push_back("lagrangian");
    csv::Writer w(out_dir + "/trajectory.csv", header);
    for (const auto& p : report.trajectory) {
      std::vector<std::string> cells = {csv::num(p.t)};
      for (Eigen::Index i = 0; i < p.x.size(); ++i)
        cells.push_back(csv::num(p.x[i]));
      for (Eigen::Index i = 0; i < p.lambda.size(); ++i)
        cells.push_back(csv::num(p.lambda[i]));
      cells.push_back(csv::num(p.lagrangian));
      w.row(cells);
    }
    files.push_back("trajectory.csv");
  }
  {
    csv::Writer w(out_dir + "/solution.csv", {"key", "value"});
    for (Eigen::Index i = 0; i < report.final.x.size(); ++i)
      w.row({"x" + std::to_string(i), csv::num(report.final.x[i])});
    for (Eigen::Index i = 0; i < report.final.lambda.size(); ++i)
      w.row({"lambda" + std::to_string(i), csv::num(report.final.lambda[i])});
    w.row({"x_err", csv::num((report.final.x - prob.x_star).norm())});
    w.row({"lambda_err",
           csv::num((report.final.lambda - prob.lambda_star).norm())});
    w.row({"iterations", csv::num(report.iterations)});
    w.row({"converged", report.converged ? "1" : "0"});
    files.push_back("solution.csv");
  }
  if (plots) {
    SvgPlot plot(cli.problem + " iterates");
    std::vector<double> ts, x0, l0;
    for (const auto& p : report.trajectory) {
      ts.push_back(static_cast<double>(p.t));
      x0.push_back(p.x[0]);
      l0.push_back(p.lambda[0]);
    }
    plot.line(ts, x0, "#1f77b4");
    plot.line(ts, l0, "#d62728");
    plot.write(out_dir + "/trajectory.svg");
    files.push_back("trajectory.svg");
  }

  RunManifest m;
  m.command = "solve";
  m.config = cli.to_json();
  detail::finish_manifest(m, out_dir, files);
  return m;
}

inline RunManifest run_finite_gan(const FiniteGanCli& cli,
                                  const std::string& out_dir,
                                  bool plots = false) {
  std::filesystem::create_directories(out_dir);
  DivergenceSpec spec =
      make_divergence(cli.divergence, cli.epsilon_wgan, cli.box_epsilon);

  Vector p_d;
  if (!cli.p_d.empty()) {
    p_d = Eigen::Map<const Vector>(cli.p_d.data(), cli.p_d.size());
    validate_distribution(p_d);
  } else {
    std::mt19937_64 rng(cli.seed);
    p_d = random_distribution(cli.n, rng);
  }

  StepSchedule sched{cli.step_a, cli.step_b};
  FiniteGanOptions opt;
  opt.simplex_projection = cli.simplex;
  opt.solve.max_iters = cli.max_iters;
  opt.solve.movement_tol = cli.movement_tol;
  opt.solve.stride = cli.stride;
  FiniteGanRun run = train_function_space(
      p_d, spec, solve_mode_from_name(cli.mode), sched, opt);

  std::vector<std::string> files;
  {
    csv::Writer w(out_dir + "/trajectory.csv",
                  {"t", "lagrangian", "max_pg_err", "max_d_err"});
    for (const auto& p : run.report.trajectory) {
      double pg_err = (p.lambda - p_d).cwiseAbs().maxCoeff();
      double d_err = 0.0;
      for (Eigen::Index i = 0; i < p.x.size(); ++i)
        d_err = std::max(
            d_err, std::abs(p.x[i] - optimal_discriminator(spec, p_d[i], p_d[i])));
      w.row({csv::num(p.t), csv::num(p.lagrangian), csv::num(pg_err),
             csv::num(d_err)});
    }
    files.push_back("trajectory.csv");
  }
  {
    csv::Writer w(out_dir + "/final.csv", {"i", "p_d", "p_g", "d", "d_opt"});
    for (Eigen::Index i = 0; i < p_d.size(); ++i)
      w.row({csv::num(static_cast<long>(i)), csv::num(p_d[i]),
             csv::num(run.final.p_g[i]), csv::num(run.final.d[i]),
             csv::num(optimal_discriminator(spec, p_d[i], p_d[i]))});
    files.push_back("final.csv");
  }
  if (plots) {
    SvgPlot plot(cli.divergence + " function-space run");
    std::vector<double> ts, pg, de;
    for (const auto& p : run.report.trajectory) {
      ts.push_back(static_cast<double>(p.t));
      pg.push_back((p.lambda - p_d).cwiseAbs().maxCoeff());
      double d_err = 0.0;
      for (Eigen::Index i = 0; i < p.x.size(); ++i)
        d_err = std::max(
            d_err, std::abs(p.x[i] - optimal_discriminator(spec, p_d[i], p_d[i])));
      de.push_back(d_err);
    }
    plot.line(ts, pg, "#1f77b4");
    plot.line(ts, de, "#d62728");
    plot.write(out_dir + "/errors.svg");
    files.push_back("errors.svg");
  }

  RunManifest m;
  m.command = "finite-gan";
  m.config = cli.to_json();
  detail::finish_manifest(m, out_dir, files);
  return m;
}

inline RunManifest run_experiment(const ExperimentCli& cli,
                                  const std::string& out_dir,
                                  bool plots = false) {
  std::filesystem::create_directories(out_dir);
  const ExperimentSpec exp = cli.name == "gauss8" ? gauss8_experiment()
                                                  : toy1d_experiment();
  TrainResult res = train(cli.train, exp);

  std::vector<std::string> files;
  const bool toy = exp.kind == ExperimentKind::toy1d;
  {
    std::vector<std::string> header = {"iter", "sigma", "disc_objective",
                                       "adversarial", "penalty"};
    if (toy) {
      header.push_back("quantile90");
      header.push_back("d_at_probe");
    } else {
      header.push_back("modes_covered");
      header.push_back("captured_fraction");
    }
    csv::Writer w(out_dir + "/metrics.csv", header);
    for (const auto& r : res.metrics) {
      std::vector<std::string> cells = {csv::num(r.iter), csv::num(r.sigma),
                                        csv::num(r.disc_objective),
                                        csv::num(r.adversarial),
                                        csv::num(r.penalty)};
      if (toy) {
        cells.push_back(csv::num(r.quantile90));
        cells.push_back(csv::num(r.d_at_probe));
      } else {
        cells.push_back(csv::num(r.modes_covered));
        cells.push_back(csv::num(r.captured_fraction));
      }
      w.row(cells);
    }
    files.push_back("metrics.csv");
  }
  {
    std::vector<std::string> header;
    for (Eigen::Index j = 0; j < res.final_samples.cols(); ++j)
      header.push_back("x" + std::to_string(j));
    csv::Writer w(out_dir + "/samples.csv", header);
    for (Eigen::Index i = 0; i < res.final_samples.rows(); ++i) {
      std::vector<std::string> cells;
      for (Eigen::Index j = 0; j < res.final_samples.cols(); ++j)
        cells.push_back(csv::num(res.final_samples(i, j)));
      w.row(cells);
    }
    files.push_back("samples.csv");
  }
  if (toy) {
    csv::Writer w(out_dir + "/dgrid.csv", {"iter", "x", "d"});
    for (const auto& row : res.d_grid)
      for (Eigen::Index i = 0; i < row.d.size(); ++i)
        w.row({csv::num(row.iter), csv::num(res.d_grid_x[i]),
               csv::num(row.d[i])});
    files.push_back("dgrid.csv");
  }
  if (plots) {
    {
      SvgPlot plot(cli.name + "/" + cli.method + " progress");
      std::vector<double> ts, val;
      for (const auto& r : res.metrics) {
        ts.push_back(static_cast<double>(r.iter));
        val.push_back(toy ? r.quantile90 : static_cast<double>(r.modes_covered));
      }
      plot.line(ts, val, "#1f77b4");
      plot.write(out_dir + "/progress.svg");
      files.push_back("progress.svg");
    }
    {
      SvgPlot plot(cli.name + "/" + cli.method + " final samples");
      std::vector<double> xs, ys;
      for (Eigen::Index i = 0; i < res.final_samples.rows(); ++i) {
        xs.push_back(res.final_samples(i, 0));
        ys.push_back(toy ? static_cast<double>(i) / res.final_samples.rows()
                         : res.final_samples(i, 1));
      }
      plot.scatter(xs, ys, "#1f77b4");
      if (!toy) {
        std::vector<double> cx, cy;
        for (Eigen::Index k = 0; k < exp.mode_centers.rows(); ++k) {
          cx.push_back(exp.mode_centers(k, 0));
          cy.push_back(exp.mode_centers(k, 1));
        }
        plot.scatter(cx, cy, "#d62728", 4.0);
      }
      plot.write(out_dir + "/samples.svg");
      files.push_back("samples.svg");
    }
    if (toy && !res.d_grid.empty()) {
      SvgPlot plot(cli.name + "/" + cli.method + " final discriminator");
      std::vector<double> xs(res.d_grid_x.data(),
                             res.d_grid_x.data() + res.d_grid_x.size());
      const auto& last = res.d_grid.back().d;
      plot.line(xs, std::vector<double>(last.data(), last.data() + last.size()),
                "#1f77b4");
      plot.write(out_dir + "/discriminator.svg");
      files.push_back("discriminator.svg");
    }
  }

  RunManifest m;
  m.command = "experiment";
  m.config = cli.to_json();
  detail::finish_manifest(m, out_dir, files);
  return m;
}

struct ReplayResult {
  bool ok = true;
  std::vector<std::string> mismatches;
};

// Re-run a manifest into out_dir and compare artifact checksums.
inline ReplayResult replay_manifest(const std::string& manifest_path,
                                    const std::string& out_dir) {
  RunManifest stored = RunManifest::load(manifest_path);
  RunManifest fresh;
  if (stored.command == "solve")
    fresh = run_solve(SolveCli::from_json(stored.config), out_dir,
                      stored.checksums.count("trajectory.svg") > 0);
  else if (stored.command == "finite-gan")
    fresh = run_finite_gan(FiniteGanCli::from_json(stored.config), out_dir,
                           stored.checksums.count("errors.svg") > 0);
  else if (stored.command == "experiment")
    fresh = run_experiment(ExperimentCli::from_json(stored.config), out_dir,
                           stored.checksums.count("progress.svg") > 0);
  else
    throw std::invalid_argument("replay: unknown command " + stored.command);

  ReplayResult result;
  for (const auto& [file, sum] : stored.checksums) {
    auto it = fresh.checksums.find(file);
    if (it == fresh.checksums.end() || it->second != sum) {
      result.ok = false;
      result.mismatches.push_back(file);
    }
  }
  return result;
}

}  // namespace pdgan
