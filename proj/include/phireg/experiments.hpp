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

#ifndef PHIREG_EXPERIMENTS_HPP_
#define PHIREG_EXPERIMENTS_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "phireg/bruns.hpp"
#include "phireg/dynamics.hpp"
#include "phireg/regret.hpp"

namespace phireg {

// Batch-run configuration. Serialized into a comment line of every output
// file so results are reproducible from the file alone.
struct ExperimentConfig {
  std::string experiment = "fig6";  // fig5b | fig6 | fig7 | counterexamples
  int trials = 10;
  uint64_t seed = 0;
  IntegratorConfig integrator;  // dt=1e-3, horizon=1000, stride=10
  int partition_bins = 10;
  int checkpoints = 100;
  std::string out_dir = "out";
  int threads = 0;  // 0: use PHIREG_THREADS or hardware parallelism

  // Strict parse: unknown keys anywhere are rejected.
  static ExperimentConfig FromJsonString(const std::string& text);
  static ExperimentConfig LoadJson(const std::string& path);
  std::string ToJsonString() const;
};

// Worker count resolution; env var PHIREG_THREADS overrides when the
// requested count is 0.
int ResolveThreadCount(int requested);

// Runs fn(0..jobs-1) on a small worker pool. Results must go to
// job-indexed slots; the first exception thrown by a job is rethrown after
// all workers finish.
void ParallelFor(int jobs, int threads, const std::function<void(int)>& fn);

// Mean and 95% normal-approximation half-width across aligned series.
struct SeriesStats {
  std::vector<double> mean;
  std::vector<double> half_width;
  int count = 0;
};
SeriesStats ComputeSeriesStats(const std::vector<const std::vector<double>*>&
                                   series);

// ---------------------------------------------------------------------------
// Batch experiments
// ---------------------------------------------------------------------------

// Mosaic-regret convergence over the 144-game catalog: `trials` independent
// interior starts per game, row-player mosaic regret with interval bins,
// time-average series at checkpoints. Values are reported on the payoff
// scale normalized to [0,1] via (u - 1) / 3 (the catalog uses 1..4), which
// divides every regret by 3; raw-scale series are emitted alongside.
struct Fig6Result {
  std::vector<std::string> game_names;
  std::vector<GameCase> game_cases;
  std::vector<double> checkpoint_times;
  // Normalized time-average mosaic regret, indexed [game * trials + trial].
  std::vector<std::vector<double>> run_series_norm;
  std::vector<uint8_t> run_ok;  // not vector<bool>: slots are written in parallel
  SeriesStats pooled;                  // across all valid runs
  std::vector<SeriesStats> per_game;   // across trials of one game
  std::vector<double> per_game_final_variance;
  int aborted = 0;
};
Fig6Result RunFig6(const ExperimentConfig& config);
void WriteFig6Outputs(const Fig6Result& result, const ExperimentConfig& config);

// Reduced replicator field on a 21x21 grid of (x1, y1) for every catalog
// game, with equilibria marked; one SVG per game plus a combined CSV.
struct Fig5bResult {
  int games = 0;
  size_t csv_rows = 0;
  double max_field_norm_at_nash = 0.0;
};
Fig5bResult RunFig5bFields(const ExperimentConfig& config);

// Conditional opponent averages in three zero-sum 3x3 games under a KL-band
// partition around a reference divergence from the row equilibrium.
struct Fig7GameResult {
  std::string name;
  Eigen::VectorXd row_nash;
  Eigen::VectorXd col_nash;
  double ref_divergence = 0.0;
  double band_eps = 0.0;
  int attempts = 1;
  ConditionalAverageSeries series;
  double final_gap = 0.0;  // inf-norm distance of the final mean to col_nash
};
struct Fig7Result {
  std::vector<Fig7GameResult> games;
};
// The three row payoff matrices (opponents receive the negation).
std::vector<std::pair<std::string, Eigen::MatrixXd>> Fig7Payoffs();
Fig7Result RunFig7(const ExperimentConfig& config, bool write_outputs = true);

// The two negative-case processes: the alternating coarse-correlated
// process (bounded external regret, linearly growing two-bin mosaic
// regret) and symmetric-start rock-paper-scissors (identical coupled
// flows, mosaic regret bounded away from zero).
struct CounterexampleResult {
  // Alternating process, row player, per-epoch least-squares slopes.
  double external_slope = 0.0;
  double mosaic_slope = 0.0;
  Eigen::MatrixXd joint;
  double cce_violation = 0.0;
  bool cce_ok = false;
  // Symmetric rock-paper-scissors.
  double symmetry_gap = 0.0;  // max over samples of max |x - y|
  double rps_mosaic_time_average = 0.0;
};
CounterexampleResult RunCounterexamples(const ExperimentConfig& config,
                                        bool write_outputs = true);

// Fast invariant sweep used by the `verify` CLI subcommand; prints one line
// per check and returns the number of failures.
int RunVerifySuite(uint64_t seed);

}  // namespace phireg

#endif  // PHIREG_EXPERIMENTS_HPP_
