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

#include "phireg/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "phireg/equilibrium.hpp"
#include "phireg/io.hpp"
#include "phireg/rng.hpp"
#include "phireg/svg.hpp"
#include "phireg/version.hpp"

namespace phireg {

namespace {

void RejectUnknownKeys(const nlohmann::json& j,
                       std::initializer_list<const char*> allowed,
                       const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument("unknown config key '" + it.key() + "' in " +
                                  where);
    }
  }
}

std::vector<std::string> ConfigComments(const ExperimentConfig& config) {
  return {"config: " + config.ToJsonString(),
          std::string("version: phireg ") + kVersion + " (" + kGitDescribe +
              ")"};
}

void WriteComments(CsvWriter& csv, const ExperimentConfig& config) {
  for (const auto& c : ConfigComments(config)) csv.Comment(c);
}

}  // namespace

ExperimentConfig ExperimentConfig::FromJsonString(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config must be an object");
  RejectUnknownKeys(j,
                    {"experiment", "trials", "seed", "integrator",
                     "partition_bins", "checkpoints", "out", "threads"},
                    "config");
  ExperimentConfig c;
  if (j.contains("experiment")) c.experiment = j["experiment"].get<std::string>();
  if (j.contains("trials")) c.trials = j["trials"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
  if (j.contains("partition_bins")) c.partition_bins = j["partition_bins"].get<int>();
  if (j.contains("checkpoints")) c.checkpoints = j["checkpoints"].get<int>();
  if (j.contains("out")) c.out_dir = j["out"].get<std::string>();
  if (j.contains("threads")) c.threads = j["threads"].get<int>();
  if (j.contains("integrator")) {
    const nlohmann::json& ji = j["integrator"];
    RejectUnknownKeys(ji, {"dt", "horizon", "record_stride", "interior_floor"},
                      "integrator");
    if (ji.contains("dt")) c.integrator.dt = ji["dt"].get<double>();
    if (ji.contains("horizon")) c.integrator.horizon = ji["horizon"].get<double>();
    if (ji.contains("record_stride")) {
      c.integrator.record_stride = ji["record_stride"].get<int>();
    }
    if (ji.contains("interior_floor")) {
      c.integrator.interior_floor = ji["interior_floor"].get<double>();
    }
  }
  if (c.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (c.checkpoints < 1) throw std::invalid_argument("checkpoints must be >= 1");
  if (c.partition_bins < 1) {
    throw std::invalid_argument("partition_bins must be >= 1");
  }
  return c;
}

ExperimentConfig ExperimentConfig::LoadJson(const std::string& path) {
  return FromJsonString(ReadFile(path));
}

std::string ExperimentConfig::ToJsonString() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["trials"] = trials;
  j["seed"] = seed;
  j["partition_bins"] = partition_bins;
  j["checkpoints"] = checkpoints;
  j["out"] = out_dir;
  j["threads"] = threads;
  j["integrator"] = {{"dt", integrator.dt},
                     {"horizon", integrator.horizon},
                     {"record_stride", integrator.record_stride},
                     {"interior_floor", integrator.interior_floor}};
  return j.dump();
}

int ResolveThreadCount(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PHIREG_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void ParallelFor(int jobs, int threads, const std::function<void(int)>& fn) {
  if (jobs <= 0) return;
  threads = std::max(1, std::min(threads, jobs));
  if (threads == 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&]() {
    while (true) {
      int i = next.fetch_add(1);
      if (i >= jobs) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

SeriesStats ComputeSeriesStats(
    const std::vector<const std::vector<double>*>& series) {
  SeriesStats stats;
  stats.count = static_cast<int>(series.size());
  if (series.empty()) return stats;
  size_t len = series[0]->size();
  stats.mean.assign(len, 0.0);
  stats.half_width.assign(len, 0.0);
  for (const auto* s : series) {
    if (s->size() != len) {
      throw std::invalid_argument("misaligned series in aggregation");
    }
    for (size_t k = 0; k < len; ++k) stats.mean[k] += (*s)[k];
  }
  for (size_t k = 0; k < len; ++k) stats.mean[k] /= stats.count;
  if (stats.count > 1) {
    for (size_t k = 0; k < len; ++k) {
      double ss = 0.0;
      for (const auto* s : series) {
        double d = (*s)[k] - stats.mean[k];
        ss += d * d;
      }
      double var = ss / (stats.count - 1);
      stats.half_width[k] = 1.96 * std::sqrt(var / stats.count);
    }
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Mosaic-regret convergence over the catalog
// ---------------------------------------------------------------------------

Fig6Result RunFig6(const ExperimentConfig& config) {
  auto catalog = EnumerateBrunsGames();
  const int num_games = static_cast<int>(catalog.size());
  const int trials = config.trials;
  const int runs = num_games * trials;

  Fig6Result result;
  result.game_names.reserve(num_games);
  result.game_cases.reserve(num_games);
  for (const auto& [id, game] : catalog) {
    result.game_names.push_back(id.name());
    result.game_cases.push_back(ClassifyCase(game));
  }
  result.run_series_norm.assign(runs, {});
  result.run_ok.assign(runs, 0);

  std::vector<std::vector<double>> run_times(runs);
  std::vector<std::string> abort_messages(runs);
  Partition part = Partition::IntervalBins(config.partition_bins);
  const int threads = ResolveThreadCount(config.threads);

  ParallelFor(runs, threads, [&](int r) {
    const int g = r / trials;
    const int trial = r % trials;
    Rng rng(ChildSeed(config.seed, static_cast<uint64_t>(g),
                      static_cast<uint64_t>(trial)));
    SimplexPoint x0 = RandomInteriorStrategy(rng, 2);
    SimplexPoint y0 = RandomInteriorStrategy(rng, 2);
    try {
      Trajectory traj =
          Integrate(catalog[g].second, x0, y0, config.integrator);
      size_t stride = (traj.num_samples() - 1) /
                      static_cast<size_t>(config.checkpoints);
      if (stride == 0) stride = 1;
      RegretReport rep = BuildRegretReport(traj, part, Player::kRow, stride);
      std::vector<double> values, times;
      values.reserve(rep.mosaic_time_average.size());
      times.reserve(rep.mosaic_time_average.size());
      for (const auto& [t, v] : rep.mosaic_time_average) {
        times.push_back(t);
        values.push_back(v / 3.0);  // payoff scale 1..4 -> [0,1]
      }
      run_times[r] = std::move(times);
      result.run_series_norm[r] = std::move(values);
      result.run_ok[r] = 1;
    } catch (const std::exception& e) {
      abort_messages[r] = e.what();
    }
  });

  std::vector<const std::vector<double>*> all_valid;
  for (int r = 0; r < runs; ++r) {
    if (result.run_ok[r]) {
      if (result.checkpoint_times.empty()) result.checkpoint_times = run_times[r];
      all_valid.push_back(&result.run_series_norm[r]);
    } else {
      ++result.aborted;
    }
  }
  if (result.aborted * 100 > runs) {
    std::string detail;
    for (int r = 0; r < runs && detail.size() < 500; ++r) {
      if (!result.run_ok[r]) {
        detail += "\n  run " + std::to_string(r) + ": " + abort_messages[r];
      }
    }
    throw std::runtime_error("more than 1% of runs aborted" + detail);
  }

  result.pooled = ComputeSeriesStats(all_valid);
  result.per_game.resize(num_games);
  result.per_game_final_variance.assign(num_games, 0.0);
  for (int g = 0; g < num_games; ++g) {
    std::vector<const std::vector<double>*> game_series;
    for (int trial = 0; trial < trials; ++trial) {
      int r = g * trials + trial;
      if (result.run_ok[r]) game_series.push_back(&result.run_series_norm[r]);
    }
    result.per_game[g] = ComputeSeriesStats(game_series);
    if (game_series.size() > 1) {
      double mean = result.per_game[g].mean.back();
      double ss = 0.0;
      for (const auto* s : game_series) {
        double d = s->back() - mean;
        ss += d * d;
      }
      result.per_game_final_variance[g] =
          ss / (static_cast<double>(game_series.size()) - 1.0);
    }
  }
  return result;
}

void WriteFig6Outputs(const Fig6Result& result,
                      const ExperimentConfig& config) {
  EnsureDirectory(config.out_dir);
  const std::string base = config.out_dir + "/";
  const int trials = config.trials;
  const size_t len = result.checkpoint_times.size();

  {
    CsvWriter norm(base + "fig6_series_norm.csv");
    CsvWriter raw(base + "fig6_series_raw.csv");
    WriteComments(norm, config);
    WriteComments(raw, config);
    norm.Header({"game_id", "trial", "t", "mosaic_time_avg"});
    raw.Header({"game_id", "trial", "t", "mosaic_time_avg"});
    for (size_t r = 0; r < result.run_series_norm.size(); ++r) {
      if (!result.run_ok[r]) continue;
      const std::string& name = result.game_names[r / trials];
      int trial = static_cast<int>(r) % trials;
      const auto& series = result.run_series_norm[r];
      for (size_t k = 0; k < series.size(); ++k) {
        double t = result.checkpoint_times[k];
        norm.NewRow().Str(name).Int(trial).Num(t).Num(series[k]).Done();
        raw.NewRow().Str(name).Int(trial).Num(t).Num(series[k] * 3.0).Done();
      }
    }
  }
  {
    CsvWriter pooled(base + "fig6_pooled.csv");
    WriteComments(pooled, config);
    pooled.Header({"t", "mean", "ci_halfwidth", "n"});
    for (size_t k = 0; k < len; ++k) {
      pooled.NewRow()
          .Num(result.checkpoint_times[k])
          .Num(result.pooled.mean[k])
          .Num(result.pooled.half_width[k])
          .Int(result.pooled.count)
          .Done();
    }
  }
  {
    CsvWriter per_game(base + "fig6_per_game.csv");
    WriteComments(per_game, config);
    per_game.Header({"game_id", "t", "mean", "ci_halfwidth", "n"});
    for (size_t g = 0; g < result.game_names.size(); ++g) {
      const SeriesStats& s = result.per_game[g];
      for (size_t k = 0; k < s.mean.size(); ++k) {
        per_game.NewRow()
            .Str(result.game_names[g])
            .Num(result.checkpoint_times[k])
            .Num(s.mean[k])
            .Num(s.half_width[k])
            .Int(s.count)
            .Done();
      }
    }
  }
  {
    CsvWriter summary(base + "fig6_summary.csv");
    WriteComments(summary, config);
    summary.Header(
        {"game_id", "case", "final_time_avg_norm", "trial_variance", "n"});
    for (size_t g = 0; g < result.game_names.size(); ++g) {
      const SeriesStats& s = result.per_game[g];
      summary.NewRow()
          .Str(result.game_names[g])
          .Str(GameCaseName(result.game_cases[g]))
          .Num(s.mean.empty() ? 0.0 : s.mean.back())
          .Num(result.per_game_final_variance[g])
          .Int(s.count)
          .Done();
    }
  }
  if (result.aborted > 0) {
    std::ofstream log(base + "fig6_aborts.log");
    log << result.aborted << " aborted runs (excluded from aggregates)\n";
  }
}

// ---------------------------------------------------------------------------
// Reduced vector fields over the catalog
// ---------------------------------------------------------------------------

Fig5bResult RunFig5bFields(const ExperimentConfig& config) {
  EnsureDirectory(config.out_dir);
  EnsureDirectory(config.out_dir + "/fig5b_svg");
  Fig5bResult result;

  CsvWriter csv(config.out_dir + "/fig5b_grid.csv");
  WriteComments(csv, config);
  csv.Header({"game_id", "x1", "y1", "dx1", "dy1"});

  const int grid = 21;
  auto catalog = EnumerateBrunsGames();
  for (const auto& [id, game] : catalog) {
    ++result.games;
    // Equilibrium markers: pure profiles plus the interior point when the
    // indifference construction applies.
    std::vector<std::pair<double, double>> nash_points;
    for (const auto& [i, j] : PureNashSet(game)) {
      nash_points.emplace_back(i == 0 ? 1.0 : 0.0, j == 0 ? 1.0 : 0.0);
    }
    GenericityReport gen = GenericityCheck(game);
    if (gen.row_nondegenerate && gen.col_nondegenerate) {
      if (auto interior = InteriorNash2x2(game)) {
        nash_points.emplace_back(interior->first[0], interior->second[0]);
      }
    }

    SvgCanvas svg(360, 360, 0.0, 1.0, 0.0, 1.0);
    svg.Frame();
    svg.AxisLabels("x1", "y1");
    svg.Text(0.02, 1.04, id.name(), 13);

    double max_norm = 0.0;
    std::vector<std::tuple<double, double, double, double>> arrows;
    for (int gx = 0; gx < grid; ++gx) {
      for (int gy = 0; gy < grid; ++gy) {
        double x1 = static_cast<double>(gx) / (grid - 1);
        double y1 = static_cast<double>(gy) / (grid - 1);
        SimplexPoint x({x1, 1.0 - x1});
        SimplexPoint y({y1, 1.0 - y1});
        auto [dx, dy] = RdVectorField(game, x, y);
        csv.NewRow().Str(id.name()).Num(x1).Num(y1).Num(dx[0]).Num(dy[0]).Done();
        ++result.csv_rows;
        arrows.emplace_back(x1, y1, dx[0], dy[0]);
        max_norm = std::max(max_norm, std::hypot(dx[0], dy[0]));
      }
    }
    double scale = max_norm > 0 ? 0.045 / max_norm : 0.0;
    for (const auto& [x1, y1, dx1, dy1] : arrows) {
      if (std::hypot(dx1, dy1) < 1e-15) continue;
      svg.Arrow(x1, y1, dx1 * scale, dy1 * scale);
    }
    for (const auto& [px, py] : nash_points) {
      svg.Circle(px, py, 4.0, "#c22");
      SimplexPoint x({px, 1.0 - px});
      SimplexPoint y({py, 1.0 - py});
      auto [dx, dy] = RdVectorField(game, x, y);
      result.max_field_norm_at_nash =
          std::max(result.max_field_norm_at_nash,
                   std::max(std::abs(dx[0]), std::abs(dy[0])));
    }
    svg.Save(config.out_dir + "/fig5b_svg/" + id.name() + ".svg");
  }
  return result;
}

// ---------------------------------------------------------------------------
// KL-band conditional averages in 3x3 zero-sum games
// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, Eigen::MatrixXd>> Fig7Payoffs() {
  Eigen::MatrixXd a1(3, 3), a2(3, 3), a3(3, 3);
  a1 << 0, -1, 1, 1, 0, -1, -1, 1, 0;
  a2 << 0, -1, 2, 1, 0, -1, -2, 1, 0;
  a3 << 1, -1, 1.2, 1, 0, -1, -1, 1, -0.5;
  return {{"rps_a1", a1}, {"rps_a2", a2}, {"rps_a3", a3}};
}

namespace {

std::pair<double, double> Barycentric(std::span<const double> p) {
  return {p[1] + 0.5 * p[2], 0.8660254037844386 * p[2]};
}

std::pair<double, double> BarycentricVertex(int index) {
  double v[3] = {0.0, 0.0, 0.0};
  v[index] = 1.0;
  return Barycentric({v, 3});
}

void WriteFig7GameOutputs(const ExperimentConfig& config,
                          const Fig7GameResult& game_result,
                          const Trajectory& traj,
                          const std::vector<size_t>& retained_idx) {
  const std::string base = config.out_dir + "/" + game_result.name;

  {
    CsvWriter raw(base + "_raw.csv");
    WriteComments(raw, config);
    raw.Header({"t", "x1", "x2", "x3", "y1", "y2", "y3"});
    size_t stride = std::max<size_t>(1, traj.num_samples() / 10000);
    for (size_t i = 0; i < traj.num_samples(); i += stride) {
      auto row = raw.NewRow();
      row.Num(traj.time(i));
      for (double v : traj.x(i)) row.Num(v);
      for (double v : traj.y(i)) row.Num(v);
      row.Done();
    }
  }
  {
    CsvWriter retained(base + "_retained.csv");
    WriteComments(retained, config);
    retained.Header({"t", "x1", "x2", "x3", "y1", "y2", "y3"});
    for (size_t i : retained_idx) {
      auto row = retained.NewRow();
      row.Num(traj.time(i));
      for (double v : traj.x(i)) row.Num(v);
      for (double v : traj.y(i)) row.Num(v);
      row.Done();
    }
  }
  {
    CsvWriter series(base + "_series.csv");
    WriteComments(series, config);
    series.Header({"t", "ybar1", "ybar2", "ybar3"});
    for (size_t k = 0; k < game_result.series.times.size(); ++k) {
      const Eigen::VectorXd& m = game_result.series.means[k];
      series.NewRow()
          .Num(game_result.series.times[k])
          .Num(m[0])
          .Num(m[1])
          .Num(m[2])
          .Done();
    }
  }

  // Barycentric scatter of observed column strategies, full and retained,
  // with the column equilibrium marked.
  for (int variant = 0; variant < 2; ++variant) {
    SvgCanvas svg(360, 340, -0.05, 1.05, -0.05, 0.95);
    svg.Text(0.0, 0.9, game_result.name +
                           (variant == 0 ? " raw" : " retained"), 12);
    auto v0 = BarycentricVertex(0);
    auto v1 = BarycentricVertex(1);
    auto v2 = BarycentricVertex(2);
    svg.Line(v0.first, v0.second, v1.first, v1.second, "#888");
    svg.Line(v1.first, v1.second, v2.first, v2.second, "#888");
    svg.Line(v2.first, v2.second, v0.first, v0.second, "#888");
    if (variant == 0) {
      size_t stride = std::max<size_t>(1, traj.num_samples() / 4000);
      for (size_t i = 0; i < traj.num_samples(); i += stride) {
        auto [bx, by] = Barycentric(traj.y(i));
        svg.Circle(bx, by, 0.8, "#69b");
      }
    } else {
      size_t stride = std::max<size_t>(1, retained_idx.size() / 4000);
      if (stride == 0) stride = 1;
      for (size_t k = 0; k < retained_idx.size(); k += stride) {
        auto [bx, by] = Barycentric(traj.y(retained_idx[k]));
        svg.Circle(bx, by, 0.8, "#386");
      }
    }
    std::vector<double> nash(game_result.col_nash.data(),
                             game_result.col_nash.data() + 3);
    auto [nx, ny] = Barycentric(nash);
    svg.Circle(nx, ny, 4.0, "#e80");
    svg.Save(base + (variant == 0 ? "_raw.svg" : "_retained.svg"));
  }
  {
    SvgCanvas svg(480, 300, 0.0, traj.time(traj.num_samples() - 1), 0.0, 1.0);
    svg.Frame();
    svg.AxisLabels("t", "average observed column strategy");
    const char* colors[3] = {"#26c", "#c62", "#2a2"};
    for (int c = 0; c < 3; ++c) {
      std::vector<std::pair<double, double>> pts;
      for (size_t k = 0; k < game_result.series.times.size(); ++k) {
        pts.emplace_back(game_result.series.times[k],
                         game_result.series.means[k][c]);
      }
      svg.Polyline(pts, colors[c]);
      double target = game_result.col_nash[c];
      svg.Line(0.0, target, traj.time(traj.num_samples() - 1), target,
               "#e80", 0.8);
    }
    svg.Save(base + "_series.svg");
  }
}

}  // namespace

Fig7Result RunFig7(const ExperimentConfig& config, bool write_outputs) {
  if (write_outputs) EnsureDirectory(config.out_dir);
  Fig7Result result;
  auto payoffs = Fig7Payoffs();
  for (size_t gi = 0; gi < payoffs.size(); ++gi) {
    const auto& [name, a] = payoffs[gi];
    Game game = ZeroSumGame(a);

    // Full-support equilibrium from the support-enumeration oracle.
    auto equilibria = NashSupportEnumeration(game);
    if (equilibria.empty()) {
      throw std::runtime_error("no equilibrium found for " + name);
    }
    const auto* chosen = &equilibria.front();
    for (const auto& eq : equilibria) {
      if (eq.first.interior(1e-9) && eq.second.interior(1e-9)) {
        chosen = &eq;
        break;
      }
    }

    Rng rng(ChildSeed(config.seed, 2000 + gi, 0));
    SimplexPoint x0 = RandomInteriorStrategy(rng, 3);
    SimplexPoint y0 = RandomInteriorStrategy(rng, 3);
    Trajectory traj = Integrate(game, x0, y0, config.integrator);

    // Reference shell: the divergence of the state one tenth into the run.
    size_t ref_idx = (traj.num_samples() - 1) / 10;
    double ref_d = KlDivergence(traj.x(ref_idx), chosen->first.span());

    Fig7GameResult game_result;
    game_result.name = name;
    game_result.row_nash = chosen->first.probs();
    game_result.col_nash = chosen->second.probs();
    game_result.ref_divergence = ref_d;

    double eps = 0.02 * ref_d;
    ConditionalAverageSeries series;
    for (int attempt = 1; attempt <= 3; ++attempt) {
      series = EmpiricalConditionalAverageKl(traj, chosen->first, ref_d, eps,
                                             Player::kRow);
      game_result.attempts = attempt;
      if (!series.empty) break;
      eps *= 2.0;
    }
    if (series.empty) {
      throw std::runtime_error("KL band never visited for " + name);
    }
    game_result.band_eps = eps;
    game_result.series = series;
    game_result.final_gap =
        (series.final_mean - game_result.col_nash).lpNorm<Eigen::Infinity>();

    if (write_outputs) {
      std::vector<size_t> retained;
      for (size_t i = 0; i < traj.num_samples(); ++i) {
        double d = KlDivergence(traj.x(i), chosen->first.span());
        if (d >= ref_d - eps && d <= ref_d + eps) retained.push_back(i);
      }
      WriteFig7GameOutputs(config, game_result, traj, retained);
    }
    result.games.push_back(std::move(game_result));
  }

  if (write_outputs) {
    CsvWriter summary(config.out_dir + "/fig7_summary.csv");
    WriteComments(summary, config);
    summary.Header({"game", "ref_divergence", "band_eps", "attempts",
                    "band_occupancy", "ybar1", "ybar2", "ybar3", "nash1",
                    "nash2", "nash3", "final_gap"});
    for (const auto& g : result.games) {
      summary.NewRow()
          .Str(g.name)
          .Num(g.ref_divergence)
          .Num(g.band_eps)
          .Int(g.attempts)
          .Num(g.series.occupancy)
          .Num(g.series.final_mean[0])
          .Num(g.series.final_mean[1])
          .Num(g.series.final_mean[2])
          .Num(g.col_nash[0])
          .Num(g.col_nash[1])
          .Num(g.col_nash[2])
          .Num(g.final_gap)
          .Done();
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Negative cases
// ---------------------------------------------------------------------------

CounterexampleResult RunCounterexamples(const ExperimentConfig& config,
                                        bool write_outputs) {
  CounterexampleResult result;

  const int epochs = 200;
  AlternatingCceProcess process(1.0, static_cast<double>(epochs));
  Partition two_bins = Partition::IntervalBins(2);
  auto series = process.RegretSeries(two_bins);
  std::vector<double> epoch_axis(epochs);
  for (int e = 0; e < epochs; ++e) epoch_axis[e] = e + 1.0;
  result.external_slope = LeastSquaresSlope(epoch_axis, series.external);
  result.mosaic_slope = LeastSquaresSlope(epoch_axis, series.mosaic);
  JointDistribution joint = process.EmpiricalJoint(epochs);
  result.joint = joint.z();
  auto cce = IsCoarseCorrelatedEquilibrium(process.game(), joint, 1e-9);
  result.cce_ok = cce.satisfied;
  result.cce_violation = cce.max_violation;

  // Symmetric-start rock-paper-scissors: identical coupled flows.
  Game rps = ZeroSumGame(Fig7Payoffs()[0].second);
  Rng rng(ChildSeed(config.seed, 3000, 0));
  SimplexPoint start = RandomInteriorStrategy(rng, 3);
  Trajectory traj = Integrate(rps, start, start, config.integrator);
  double gap = 0.0;
  for (size_t i = 0; i < traj.num_samples(); ++i) {
    auto x = traj.x(i);
    auto y = traj.y(i);
    for (int c = 0; c < 3; ++c) gap = std::max(gap, std::abs(x[c] - y[c]));
  }
  result.symmetry_gap = gap;
  size_t stride =
      std::max<size_t>(1, (traj.num_samples() - 1) /
                              static_cast<size_t>(config.checkpoints));
  RegretReport report = BuildRegretReport(
      traj, Partition::IntervalBins(config.partition_bins), Player::kRow,
      stride);
  result.rps_mosaic_time_average = report.mosaic_time_average.back().second;

  if (write_outputs) {
    EnsureDirectory(config.out_dir);
    {
      CsvWriter csv(config.out_dir + "/counterexample_epochs.csv");
      WriteComments(csv, config);
      csv.Header({"epoch", "external_cumulative", "mosaic_cumulative"});
      for (int e = 0; e < epochs; ++e) {
        csv.NewRow()
            .Int(e + 1)
            .Num(series.external[e])
            .Num(series.mosaic[e])
            .Done();
      }
    }
    {
      CsvWriter csv(config.out_dir + "/counterexample_summary.csv");
      WriteComments(csv, config);
      csv.Header({"external_slope", "mosaic_slope", "z11", "z12", "z21", "z22",
                  "cce_violation", "cce_ok"});
      csv.NewRow()
          .Num(result.external_slope)
          .Num(result.mosaic_slope)
          .Num(result.joint(0, 0))
          .Num(result.joint(0, 1))
          .Num(result.joint(1, 0))
          .Num(result.joint(1, 1))
          .Num(result.cce_violation)
          .Int(result.cce_ok ? 1 : 0)
          .Done();
    }
    {
      CsvWriter csv(config.out_dir + "/rps_symmetric.csv");
      WriteComments(csv, config);
      csv.Header({"t", "mosaic_time_avg"});
      for (const auto& [t, v] : report.mosaic_time_average) {
        csv.NewRow().Num(t).Num(v).Done();
      }
    }
    {
      CsvWriter csv(config.out_dir + "/rps_symmetric_summary.csv");
      WriteComments(csv, config);
      csv.Header({"symmetry_gap", "mosaic_time_avg_final"});
      csv.NewRow()
          .Num(result.symmetry_gap)
          .Num(result.rps_mosaic_time_average)
          .Done();
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// `verify` invariant sweep
// ---------------------------------------------------------------------------

namespace {

bool Check(const char* name, bool ok, int* failures) {
  std::printf("%s %s\n", ok ? "[ok]  " : "[FAIL]", name);
  if (!ok) ++*failures;
  return ok;
}

Game RandomGame2x2(Rng& rng) {
  Eigen::MatrixXd a(2, 2), b(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      a(i, j) = rng.NextUniform();
      b(i, j) = rng.NextUniform();
    }
  }
  return Game(a, b);
}

double BruteForceSwapValue(const SwapAccumulator& acc) {
  int n = acc.num_actions();
  auto total = acc.total_matrix();
  long long maps = 1;
  for (int i = 0; i < n; ++i) maps *= n;
  double best = -std::numeric_limits<double>::infinity();
  for (long long code = 0; code < maps; ++code) {
    long long rest = code;
    double value = 0.0;
    for (int a = 0; a < n; ++a) {
      int target = static_cast<int>(rest % n);
      rest /= n;
      value += total[a * n + target];
    }
    best = std::max(best, value);
  }
  return best - acc.realized();
}

}  // namespace

int RunVerifySuite(uint64_t seed) {
  int failures = 0;
  Rng rng(SplitMix64(seed ^ 0xfeedULL));

  // Catalog shape.
  auto catalog = EnumerateBrunsGames();
  bool catalog_ok = catalog.size() == 144;
  for (const auto& [id, game] : catalog) {
    catalog_ok = catalog_ok && game.row_payoff().minCoeff() >= 1 &&
                 game.row_payoff().maxCoeff() <= 4 &&
                 game.col_payoff().minCoeff() >= 1 &&
                 game.col_payoff().maxCoeff() <= 4;
  }
  Check("catalog holds 144 games with payoffs in 1..4", catalog_ok, &failures);

  bool involution_ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd m(2, 2);
    for (int i = 0; i < 4; ++i) {
      m(i / 2, i % 2) = std::floor(rng.NextUniform() * 9) - 4;
    }
    Eigen::MatrixXd twice = AntiDiagonalTranspose(AntiDiagonalTranspose(m));
    involution_ok = involution_ok && (twice - m).cwiseAbs().maxCoeff() == 0.0;
  }
  Check("anti-diagonal transpose is an involution", involution_ok, &failures);

  // Pure equilibria against a direct four-profile scan.
  bool pure_ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    Game g = RandomGame2x2(rng);
    std::vector<std::pair<int, int>> direct;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        bool ok = g.row_payoff()(i, j) >= g.row_payoff()(1 - i, j) &&
                  g.col_payoff()(i, j) >= g.col_payoff()(i, 1 - j);
        if (ok) direct.emplace_back(i, j);
      }
    }
    pure_ok = pure_ok && direct == PureNashSet(g);
  }
  Check("pure equilibria match the four-profile scan", pure_ok, &failures);

  // Interior equilibria: certificate and inclusion chain.
  bool chain_ok = true;
  int found = 0;
  for (int trial = 0; trial < 400 && found < 50; ++trial) {
    Game g = RandomGame2x2(rng);
    GenericityReport gen = GenericityCheck(g);
    if (!gen.row_nondegenerate || !gen.col_nondegenerate) continue;
    auto nash = InteriorNash2x2(g);
    if (!nash) continue;
    ++found;
    auto z = JointDistribution::Product(nash->first, nash->second);
    chain_ok = chain_ok && IsCorrelatedEquilibrium(g, z, 1e-9).satisfied &&
               IsCoarseCorrelatedEquilibrium(g, z, 1e-9).satisfied;
  }
  Check("interior equilibria satisfy the CE/CCE inclusion chain",
        chain_ok && found > 10, &failures);

  // Vector-field rest points.
  {
    Game mp = MatchingPennies();
    auto [dx, dy] = RdVectorField(mp, SimplexPoint::Uniform(2),
                                  SimplexPoint::Uniform(2));
    bool rest_ok = dx.lpNorm<Eigen::Infinity>() < 1e-12 &&
                   dy.lpNorm<Eigen::Infinity>() < 1e-12;
    for (int i = 0; i < 2 && rest_ok; ++i) {
      for (int j = 0; j < 2; ++j) {
        auto [vx, vy] = RdVectorField(mp, SimplexPoint::Vertex(2, i),
                                      SimplexPoint::Vertex(2, j));
        rest_ok = rest_ok && vx.lpNorm<Eigen::Infinity>() < 1e-12 &&
                  vy.lpNorm<Eigen::Infinity>() < 1e-12;
      }
    }
    Check("equilibria and vertices are rest points", rest_ok, &failures);
  }

  // Field shift invariance.
  bool shift_ok = true;
  for (int trial = 0; trial < 5; ++trial) {
    Game g = RandomGame2x2(rng);
    Eigen::MatrixXd a = g.row_payoff();
    Eigen::MatrixXd b = g.col_payoff();
    double c1 = rng.NextUniform() * 4 - 2, c2 = rng.NextUniform() * 4 - 2;
    double d1 = rng.NextUniform() * 4 - 2, d2 = rng.NextUniform() * 4 - 2;
    for (int i = 0; i < 2; ++i) {
      a(i, 0) += c1;
      a(i, 1) += c2;
      b(0, i) += d1;
      b(1, i) += d2;
    }
    Game shifted(a, b);
    for (int pt = 0; pt < 5; ++pt) {
      SimplexPoint x(rng.NextSimplex(2));
      SimplexPoint y(rng.NextSimplex(2));
      auto [dx0, dy0] = RdVectorField(g, x, y);
      auto [dx1, dy1] = RdVectorField(shifted, x, y);
      shift_ok = shift_ok && (dx0 - dx1).lpNorm<Eigen::Infinity>() < 1e-12 &&
                 (dy0 - dy1).lpNorm<Eigen::Infinity>() < 1e-12;
    }
  }
  Check("replicator field invariant under payoff shifts", shift_ok, &failures);

  // Regret hierarchy and singleton collapse on short runs.
  bool hierarchy_ok = true, singleton_ok = true;
  IntegratorConfig short_cfg;
  short_cfg.horizon = 20.0;
  for (int trial = 0; trial < 10; ++trial) {
    Game g = RandomGame2x2(rng);
    SimplexPoint x0 = RandomInteriorStrategy(rng, 2);
    SimplexPoint y0 = RandomInteriorStrategy(rng, 2);
    Trajectory traj = Integrate(g, x0, y0, short_cfg);
    auto acc10 = Accumulate(traj, Partition::IntervalBins(10), Player::kRow);
    double tol = 1e-8 * short_cfg.horizon;
    double ext = ExternalRegret(acc10), internal = InternalRegret(acc10);
    double swap = SwapRegret(acc10), mosaic = MosaicRegret(acc10);
    hierarchy_ok = hierarchy_ok && ext <= internal + tol &&
                   internal <= swap + tol && swap <= mosaic + tol;
    auto acc1 = Accumulate(traj, Partition::Singleton(), Player::kRow);
    singleton_ok = singleton_ok && MosaicRegret(acc1) == SwapRegret(acc1);
  }
  Check("regret hierarchy holds on random games", hierarchy_ok, &failures);
  Check("singleton mosaic equals swap bitwise", singleton_ok, &failures);

  // Row-max swap reduction against brute force.
  bool swap_oracle_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + static_cast<int>(rng.NextUniform() * 3);  // 2..4
    SwapAccumulator acc(n, 1);
    std::vector<double> own(n), u(n);
    for (int seg = 0; seg < 5; ++seg) {
      Eigen::VectorXd mix = rng.NextSimplex(n);
      for (int i = 0; i < n; ++i) {
        own[i] = mix[i];
        u[i] = rng.NextUniform();
      }
      acc.AddConstantSegment(0, own, u, 0.5 + rng.NextUniform());
    }
    swap_oracle_ok = swap_oracle_ok && SwapRegret(acc) == BruteForceSwapValue(acc);
  }
  Check("row-max swap value equals brute-force enumeration", swap_oracle_ok,
        &failures);

  // Conservation on a short orbit.
  {
    Game mp = MatchingPennies();
    IntegratorConfig cfg;
    cfg.horizon = 30.0;
    Trajectory traj =
        Integrate(mp, SimplexPoint({0.8, 0.2}), SimplexPoint({0.5, 0.5}), cfg);
    InvariantEvaluator inv(mp);
    double j0 = inv(traj.x(0), traj.y(0));
    double drift = 0.0;
    for (size_t i = 0; i < traj.num_samples(); ++i) {
      drift = std::max(drift, std::abs(inv(traj.x(i), traj.y(i)) - j0));
    }
    Check("KL invariant conserved along a cyclic orbit", drift < 1e-6,
          &failures);
  }

  return failures;
}

}  // namespace phireg
