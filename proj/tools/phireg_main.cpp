// Copyright 2026 The Phireg Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line driver: single-game simulation and regret audits, catalog
// export, batch experiments, and a fast invariant sweep.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phireg/bruns.hpp"
#include "phireg/dynamics.hpp"
#include "phireg/equilibrium.hpp"
#include "phireg/experiments.hpp"
#include "phireg/io.hpp"
#include "phireg/regret.hpp"
#include "phireg/rng.hpp"
#include "phireg/version.hpp"

namespace {

using namespace phireg;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNumericalError = 2;

std::vector<std::string> CliComments(const std::string& invocation) {
  return {"invocation: " + invocation,
          std::string("version: phireg ") + kVersion + " (" + kGitDescribe +
              ")"};
}

SimplexPoint ParsePoint(const std::vector<double>& coords) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(coords.size()));
  for (size_t i = 0; i < coords.size(); ++i) v[i] = coords[i];
  return SimplexPoint(v);
}

int RunSimulate(const std::string& game_path, std::vector<double> x0_coords,
                std::vector<double> y0_coords, const IntegratorConfig& cfg,
                uint64_t seed, const std::string& out_path) {
  Game game = Game::Load(game_path);
  Rng rng(ChildSeed(seed, 0, 0));
  SimplexPoint x0 = x0_coords.empty()
                        ? RandomInteriorStrategy(rng, game.num_row_actions())
                        : ParsePoint(x0_coords);
  SimplexPoint y0 = y0_coords.empty()
                        ? RandomInteriorStrategy(rng, game.num_col_actions())
                        : ParsePoint(y0_coords);
  Trajectory traj = Integrate(game, x0, y0, cfg);
  WriteTrajectoryCsv(traj, out_path,
                     CliComments("simulate --game " + game_path));
  std::printf("wrote %zu samples to %s\n", traj.num_samples(),
              out_path.c_str());
  return kExitOk;
}

int RunBrunsList() {
  for (const auto& [id, game] : EnumerateBrunsGames()) {
    std::printf("%s\n", id.name().c_str());
  }
  return kExitOk;
}

int RunBrunsExport(const std::string& out_dir) {
  EnsureDirectory(out_dir);
  for (const auto& [id, game] : EnumerateBrunsGames()) {
    game.Save(out_dir + "/" + id.name() + ".json");
  }
  std::printf("wrote 144 games to %s\n", out_dir.c_str());
  return kExitOk;
}

int RunRegretAudit(const std::string& game_path, int bins,
                   const IntegratorConfig& cfg, uint64_t seed, int trials,
                   const std::string& out_path,
                   const std::string& series_path) {
  Game game = Game::Load(game_path);
  Partition part = Partition::IntervalBins(bins);

  CsvWriter csv(out_path);
  for (const auto& c : CliComments("regret --game " + game_path)) {
    csv.Comment(c);
  }
  csv.Header({"game_id", "trial", "T", "external", "internal", "swap",
              "mosaic"});
  CsvWriter series(series_path);
  for (const auto& c : CliComments("regret --game " + game_path)) {
    series.Comment(c);
  }
  series.Header({"game_id", "trial", "t", "mosaic_time_avg"});

  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(ChildSeed(seed, 0, static_cast<uint64_t>(trial)));
    SimplexPoint x0 = RandomInteriorStrategy(rng, game.num_row_actions());
    SimplexPoint y0 = RandomInteriorStrategy(rng, game.num_col_actions());
    Trajectory traj = Integrate(game, x0, y0, cfg);
    RegretReport report = BuildRegretReport(traj, part, Player::kRow);
    csv.NewRow()
        .Str(game_path)
        .Int(trial)
        .Num(report.horizon)
        .Num(report.external)
        .Num(report.internal)
        .Num(report.swap)
        .Num(report.mosaic)
        .Done();
    for (const auto& [t, v] : report.mosaic_time_average) {
      series.NewRow().Str(game_path).Int(trial).Num(t).Num(v).Done();
    }
  }
  std::printf("wrote %s and %s\n", out_path.c_str(), series_path.c_str());
  return kExitOk;
}

int RunExperiment(const ExperimentConfig& config) {
  if (config.experiment == "fig6") {
    Fig6Result result = RunFig6(config);
    WriteFig6Outputs(result, config);
    std::printf("fig6: %zu runs, %d aborted, pooled final %.6f\n",
                result.run_series_norm.size(), result.aborted,
                result.pooled.mean.empty() ? 0.0 : result.pooled.mean.back());
  } else if (config.experiment == "fig5b") {
    Fig5bResult result = RunFig5bFields(config);
    std::printf("fig5b: %d games, %zu grid rows\n", result.games,
                result.csv_rows);
  } else if (config.experiment == "fig7") {
    Fig7Result result = RunFig7(config);
    for (const auto& g : result.games) {
      std::printf("fig7 %s: final gap to equilibrium %.5f (band eps %.5g)\n",
                  g.name.c_str(), g.final_gap, g.band_eps);
    }
  } else if (config.experiment == "counterexamples") {
    CounterexampleResult result = RunCounterexamples(config);
    std::printf(
        "counterexamples: external slope %.6g, mosaic slope %.6g, "
        "cce violation %.3g, rps mosaic avg %.4f\n",
        result.external_slope, result.mosaic_slope, result.cce_violation,
        result.rps_mosaic_time_average);
  } else {
    std::fprintf(stderr, "unknown experiment: %s\n",
                 config.experiment.c_str());
    return kExitInputError;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phireg: replicator dynamics and partition-regret laboratory"};
  app.set_version_flag("--version", std::string("phireg ") + kVersion);
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "integrate one game");
  std::string sim_game, sim_out = "trajectory.csv";
  std::vector<double> sim_x0, sim_y0;
  IntegratorConfig sim_cfg;
  uint64_t sim_seed = 0;
  simulate->add_option("--game", sim_game, "game JSON file")->required();
  simulate->add_option("--x0", sim_x0, "row start (defaults to random)");
  simulate->add_option("--y0", sim_y0, "col start (defaults to random)");
  simulate->add_option("--T", sim_cfg.horizon, "horizon");
  simulate->add_option("--dt", sim_cfg.dt, "step size");
  simulate->add_option("--stride", sim_cfg.record_stride, "record stride");
  simulate->add_option("--seed", sim_seed, "seed for random starts");
  simulate->add_option("--out", sim_out, "output CSV");

  // bruns
  auto* bruns = app.add_subcommand("bruns", "catalog of 144 2x2 games");
  auto* bruns_list = bruns->add_subcommand("list", "print game ids");
  auto* bruns_export = bruns->add_subcommand("export", "write game JSON files");
  std::string bruns_out = "bruns_games";
  bruns_export->add_option("--out", bruns_out, "output directory");
  bruns->require_subcommand(1);

  // regret
  auto* regret = app.add_subcommand("regret", "regret audit of one game");
  std::string reg_game, reg_out = "regret.csv", reg_series = "regret_series.csv";
  int reg_bins = 10, reg_trials = 1;
  IntegratorConfig reg_cfg;
  uint64_t reg_seed = 0;
  regret->add_option("--game", reg_game, "game JSON file")->required();
  regret->add_option("--bins", reg_bins, "interval bins");
  regret->add_option("--T", reg_cfg.horizon, "horizon");
  regret->add_option("--dt", reg_cfg.dt, "step size");
  regret->add_option("--stride", reg_cfg.record_stride, "record stride");
  regret->add_option("--seed", reg_seed, "seed");
  regret->add_option("--trials", reg_trials, "independent starts");
  regret->add_option("--out", reg_out, "report CSV");
  regret->add_option("--series-out", reg_series, "time-average series CSV");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "batch experiment");
  std::string exp_name;
  std::string exp_config_path;
  uint64_t exp_seed = 0;
  std::string exp_out;
  int exp_trials = 0, exp_threads = 0;
  experiment
      ->add_option("name", exp_name,
                   "one of fig5b, fig6, fig7, counterexamples")
      ->required();
  experiment->add_option("--config", exp_config_path, "config JSON file");
  auto* exp_seed_opt = experiment->add_option("--seed", exp_seed, "seed");
  auto* exp_out_opt = experiment->add_option("--out", exp_out, "output dir");
  auto* exp_trials_opt =
      experiment->add_option("--trials", exp_trials, "trials per game");
  auto* exp_threads_opt =
      experiment->add_option("--threads", exp_threads, "worker count");

  // verify
  auto* verify = app.add_subcommand("verify", "fast invariant sweep");
  uint64_t verify_seed = 12345;
  verify->add_option("--seed", verify_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (simulate->parsed()) {
      return RunSimulate(sim_game, sim_x0, sim_y0, sim_cfg, sim_seed, sim_out);
    }
    if (bruns->parsed()) {
      if (bruns_list->parsed()) return RunBrunsList();
      if (bruns_export->parsed()) return RunBrunsExport(bruns_out);
    }
    if (regret->parsed()) {
      return RunRegretAudit(reg_game, reg_bins, reg_cfg, reg_seed, reg_trials,
                            reg_out, reg_series);
    }
    if (experiment->parsed()) {
      ExperimentConfig config;
      if (!exp_config_path.empty()) {
        config = ExperimentConfig::LoadJson(exp_config_path);
      }
      config.experiment = exp_name;
      if (exp_seed_opt->count() > 0) config.seed = exp_seed;
      if (exp_out_opt->count() > 0) config.out_dir = exp_out;
      if (exp_trials_opt->count() > 0) config.trials = exp_trials;
      if (exp_threads_opt->count() > 0) config.threads = exp_threads;
      return RunExperiment(config);
    }
    if (verify->parsed()) {
      int failures = RunVerifySuite(verify_seed);
      if (failures == 0) {
        std::printf("verify: all checks passed\n");
        return kExitOk;
      }
      std::printf("verify: %d checks failed\n", failures);
      return kExitNumericalError;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInputError;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumericalError;
  }
  return kExitInputError;
}
