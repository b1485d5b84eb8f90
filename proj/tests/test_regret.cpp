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

#include <cmath>

#include "doctest.h"
#include "phireg/bruns.hpp"
#include "phireg/equilibrium.hpp"
#include "phireg/regret.hpp"
#include "phireg/rng.hpp"

namespace phireg {
namespace {

Game BrunsPair(const char* row, const char* col) {
  return BuildBrunsGame({BrunsBasisFromCode(row), BrunsBasisFromCode(col)});
}

// Trajectory with a prescribed constant joint state.
Trajectory ConstantTrajectory(const Game& game, const SimplexPoint& x,
                              const SimplexPoint& y, double horizon,
                              double sample_dt) {
  IntegratorConfig cfg;
  cfg.dt = sample_dt;
  cfg.record_stride = 1;
  cfg.horizon = horizon;
  Trajectory traj(game, cfg, x.size(), y.size());
  int samples = static_cast<int>(std::llround(horizon / sample_dt)) + 1;
  for (int i = 0; i < samples; ++i) {
    traj.Append(i * sample_dt, x.span(), y.span());
  }
  return traj;
}

// Exhaustive swap-function enumeration, the oracle for the row-max formula.
double BruteForceSwap(const SwapAccumulator& acc) {
  int n = acc.num_actions();
  auto total = acc.total_matrix();
  long long maps = 1;
  for (int i = 0; i < n; ++i) maps *= n;
  double best = -1e300;
  for (long long code = 0; code < maps; ++code) {
    long long rest = code;
    double value = 0.0;
    for (int a = 0; a < n; ++a) {
      value += total[a * n + static_cast<int>(rest % n)];
      rest /= n;
    }
    best = std::max(best, value);
  }
  return best - acc.realized();
}

SwapAccumulator RandomAccumulator(Rng& rng, int n, int segments = 6) {
  SwapAccumulator acc(n, 1);
  std::vector<double> own(n), u(n);
  for (int s = 0; s < segments; ++s) {
    Eigen::VectorXd mix = rng.NextSimplex(n);
    for (int i = 0; i < n; ++i) {
      own[i] = mix[i];
      u[i] = rng.NextUniform();
    }
    acc.AddConstantSegment(0, own, u, 0.25 + rng.NextUniform());
  }
  return acc;
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

}  // namespace

TEST_CASE("partition bin assignment") {
  Partition ten = Partition::IntervalBins(10);
  CHECK(ten.num_bins() == 10);
  double p[2] = {0.0, 1.0};
  CHECK(ten.BinOf({p, 2}) == 0);
  p[0] = 0.09999;
  CHECK(ten.BinOf({p, 2}) == 0);
  p[0] = 0.1;
  CHECK(ten.BinOf({p, 2}) == 1);
  p[0] = 1.0;
  CHECK(ten.BinOf({p, 2}) == 9);  // closed top bin

  Partition bands =
      Partition::KlBands(SimplexPoint::Uniform(2), 0.2, 0.05);
  double q[2] = {0.5, 0.5};
  CHECK(bands.BinOf({q, 2}) == 1);  // divergence 0, outside the shell
}

TEST_CASE("accumulation closed forms on constant play") {
  Game mp = MatchingPennies();
  SimplexPoint x = SimplexPoint::Vertex(2, 0);
  SimplexPoint y({0.3, 0.7});
  const double horizon = 8.0;
  Trajectory traj = ConstantTrajectory(mp, x, y, horizon, 0.01);
  auto acc = Accumulate(traj, Partition::Singleton(), Player::kRow);

  // u = A y is constant; first own action carries all the mass.
  Eigen::VectorXd u = mp.row_payoff() * y.probs();
  auto total = acc.total_matrix();
  for (int b = 0; b < 2; ++b) {
    CHECK(total[0 * 2 + b] == doctest::Approx(horizon * u[b]).epsilon(1e-12));
    CHECK(total[1 * 2 + b] == doctest::Approx(0.0));
    CHECK(acc.raw_utility()[b] ==
          doctest::Approx(horizon * u[b]).epsilon(1e-12));
  }
  CHECK(acc.realized() == doctest::Approx(horizon * u[0]).epsilon(1e-12));
  CHECK(acc.horizon() == doctest::Approx(horizon));

  // Constant play of the best action has zero external regret.
  if (u[0] >= u[1]) CHECK(ExternalRegret(acc) == doctest::Approx(0.0));
}

TEST_CASE("external regret closed form for a mixed constant") {
  SwapAccumulator acc(2, 1);
  double own[2] = {0.5, 0.5};
  double u[2] = {1.0, 0.0};
  const double horizon = 12.0;
  acc.AddConstantSegment(0, {own, 2}, {u, 2}, horizon);
  CHECK(ExternalRegret(acc) == doctest::Approx(horizon / 2.0));
  // Constant maps are reachable swaps, so the hierarchy includes this gain.
  CHECK(SwapRegret(acc) == doctest::Approx(horizon / 2.0));
}

TEST_CASE("swap regret equals brute force enumeration") {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + trial % 3;  // 2, 3, 4
    SwapAccumulator acc = RandomAccumulator(rng, n);
    CHECK(SwapRegret(acc) == BruteForceSwap(acc));  // identical arithmetic
    CHECK(InternalRegret(acc) <= SwapRegret(acc) + 1e-12);
    CHECK(MosaicRegret(acc) == SwapRegret(acc));  // singleton accumulator
  }
}

TEST_CASE("two-action swap maximum over the four explicit maps") {
  Rng rng(103);
  SwapAccumulator acc = RandomAccumulator(rng, 2);
  auto s = acc.total_matrix();
  double explicit_best = -1e300;
  for (int f0 = 0; f0 < 2; ++f0) {
    for (int f1 = 0; f1 < 2; ++f1) {
      explicit_best = std::max(explicit_best, s[f0] + s[2 + f1]);
    }
  }
  CHECK(SwapRegret(acc) == doctest::Approx(explicit_best - acc.realized()));
}

TEST_CASE("bin occupancy, refinement consistency and monotonicity") {
  Game mp = MatchingPennies();
  IntegratorConfig cfg;
  cfg.horizon = 100.0;
  Trajectory traj =
      Integrate(mp, SimplexPoint({0.85, 0.15}), SimplexPoint({0.5, 0.5}), cfg);

  auto coarse = Accumulate(traj, Partition::IntervalBins(5), Player::kRow);
  auto fine = Accumulate(traj, Partition::IntervalBins(10), Player::kRow);

  double occupancy = 0.0;
  for (int k = 0; k < 10; ++k) occupancy += fine.occupancy(k);
  CHECK(occupancy == doctest::Approx(fine.horizon()).epsilon(1e-12));
  CHECK(fine.horizon() == doctest::Approx(100.0).epsilon(1e-9));

  // Each coarse bin is the union of two fine bins; the integrals add up.
  for (int k = 0; k < 5; ++k) {
    auto c = coarse.bin_matrix(k);
    auto f0 = fine.bin_matrix(2 * k);
    auto f1 = fine.bin_matrix(2 * k + 1);
    for (int e = 0; e < 4; ++e) {
      CHECK(c[e] == doctest::Approx(f0[e] + f1[e]).epsilon(1e-10));
    }
    CHECK(coarse.occupancy(k) ==
          doctest::Approx(fine.occupancy(2 * k) + fine.occupancy(2 * k + 1))
              .epsilon(1e-10));
  }
  CHECK(MosaicRegret(fine) >= MosaicRegret(coarse) - 1e-12);

  // Singleton collapse is exact, not just approximate.
  auto single = Accumulate(traj, Partition::Singleton(), Player::kRow);
  CHECK(MosaicRegret(single) == SwapRegret(single));
}

TEST_CASE("regret hierarchy on random short runs") {
  Rng rng(211);
  IntegratorConfig cfg;
  cfg.horizon = 50.0;
  for (int trial = 0; trial < 15; ++trial) {
    Game g = RandomGame2x2(rng);
    SimplexPoint x0 = RandomInteriorStrategy(rng, 2);
    SimplexPoint y0 = RandomInteriorStrategy(rng, 2);
    Trajectory traj = Integrate(g, x0, y0, cfg);
    for (Player p : {Player::kRow, Player::kCol}) {
      auto acc = Accumulate(traj, Partition::IntervalBins(10), p);
      double tol = 1e-8 * cfg.horizon;
      CHECK(ExternalRegret(acc) <= InternalRegret(acc) + tol);
      CHECK(InternalRegret(acc) <= SwapRegret(acc) + tol);
      CHECK(SwapRegret(acc) <= MosaicRegret(acc) + tol);
    }
  }
}

TEST_CASE("mosaic time-average series") {
  Game mp = MatchingPennies();
  IntegratorConfig cfg;
  cfg.horizon = 1000.0;
  Trajectory traj =
      Integrate(mp, SimplexPoint({0.8, 0.2}), SimplexPoint({0.45, 0.55}), cfg);
  Partition part = Partition::IntervalBins(10);
  RegretReport report = BuildRegretReport(traj, part, Player::kRow);
  REQUIRE_FALSE(report.mosaic_time_average.empty());
  auto [t_final, avg_final] = report.mosaic_time_average.back();
  CHECK(t_final == doctest::Approx(1000.0));
  CHECK(avg_final == doctest::Approx(report.mosaic / report.horizon));
  CHECK(avg_final < 0.05);  // the cyclic orbit keeps the average vanishing
  for (const auto& [t, v] : report.mosaic_time_average) {
    CHECK(v >= -1e-12);  // identity deviation is always available
  }
  CHECK(report.per_bin.size() == 10);
}

TEST_CASE("empirical conditional average") {
  Game mp = MatchingPennies();

  // Constant trajectory inside the band reproduces the opponent strategy.
  SimplexPoint x({0.6, 0.4}), y({0.3, 0.7});
  Trajectory constant = ConstantTrajectory(mp, x, y, 5.0, 0.01);
  auto series = EmpiricalConditionalAverage(constant, 0.6, 0.01, Player::kRow);
  REQUIRE_FALSE(series.empty);
  CHECK(series.final_mean[0] == doctest::Approx(0.3));
  CHECK(series.occupancy == doctest::Approx(5.0));

  // Band never visited: flagged empty, not an error.
  auto missing =
      EmpiricalConditionalAverage(constant, 0.1, 0.01, Player::kRow);
  CHECK(missing.empty);
  CHECK(missing.sample_count == 0);

  // Along a cyclic orbit the banded average approaches the opponent
  // equilibrium component.
  IntegratorConfig cfg;
  cfg.horizon = 1000.0;
  Trajectory orbit =
      Integrate(mp, SimplexPoint({0.85, 0.15}), SimplexPoint({0.5, 0.5}), cfg);
  auto banded = EmpiricalConditionalAverage(orbit, 0.6, 0.01, Player::kRow);
  REQUIRE_FALSE(banded.empty);
  CHECK(std::abs(banded.final_mean[0] - 0.5) < 1e-2);
  CHECK(std::abs(banded.final_mean[1] - 0.5) < 1e-2);
}

TEST_CASE("empirical conditional average under a KL band") {
  Eigen::MatrixXd a2(3, 3);
  a2 << 0, -1, 2, 1, 0, -1, -2, 1, 0;
  Game biased = ZeroSumGame(a2);
  auto equilibria = NashSupportEnumeration(biased);
  REQUIRE(equilibria.size() == 1);
  const SimplexPoint& x_star = equilibria[0].first;
  const SimplexPoint& y_star = equilibria[0].second;

  IntegratorConfig cfg;
  cfg.horizon = 1000.0;
  Rng rng(77);
  SimplexPoint x0 = RandomInteriorStrategy(rng, 3);
  SimplexPoint y0 = RandomInteriorStrategy(rng, 3);
  Trajectory traj = Integrate(biased, x0, y0, cfg);

  size_t ref_idx = (traj.num_samples() - 1) / 10;
  double ref_d = KlDivergence(traj.x(ref_idx), x_star.span());
  auto series = EmpiricalConditionalAverageKl(traj, x_star, ref_d,
                                              0.02 * ref_d, Player::kRow);
  REQUIRE_FALSE(series.empty);
  CHECK((series.final_mean - y_star.probs()).lpNorm<Eigen::Infinity>() <
        2e-2);
}

TEST_CASE("predicted conditional average") {
  Game mp = MatchingPennies();
  IntegratorConfig cfg;
  cfg.horizon = 60.0;
  Trajectory orbit =
      Integrate(mp, SimplexPoint({0.9, 0.1}), SimplexPoint({0.5, 0.5}), cfg);

  // Zero-sum prediction is the opponent equilibrium for any valid band.
  for (double sigma : {0.35, 0.5, 0.7, 0.85}) {
    SimplexPoint pred = PredictedConditionalAverage(mp, orbit, sigma);
    CHECK(std::abs(pred[0] - 0.5) < 1e-3);
  }

  // Outside the orbit's range the prediction refuses.
  CHECK_THROWS_AS(PredictedConditionalAverage(mp, orbit, 0.999),
                  std::domain_error);

  // Cross-validation against the empirical banded average.
  IntegratorConfig long_cfg;
  long_cfg.horizon = 2000.0;
  Trajectory long_orbit =
      Integrate(mp, SimplexPoint({0.9, 0.1}), SimplexPoint({0.5, 0.5}),
                long_cfg);
  SimplexPoint pred = PredictedConditionalAverage(mp, long_orbit, 0.7);
  auto emp = EmpiricalConditionalAverage(long_orbit, 0.7, 0.005, Player::kRow);
  REQUIRE_FALSE(emp.empty);
  CHECK((pred.probs() - emp.final_mean).lpNorm<Eigen::Infinity>() < 1e-2);
}

TEST_CASE("alternating coarse-correlated process") {
  AlternatingCceProcess process(1.0, 200.0);
  CHECK(process.num_epochs() == 200);

  // Exact joint over one pair of epochs.
  JointDistribution joint2 = process.EmpiricalJoint(2);
  CHECK(joint2.z()(0, 0) == 5.0 / 16.0);
  CHECK(joint2.z()(0, 1) == 3.0 / 16.0);
  CHECK(joint2.z()(1, 0) == 3.0 / 16.0);
  CHECK(joint2.z()(1, 1) == 5.0 / 16.0);
  JointDistribution joint_all = process.EmpiricalJoint(200);
  CHECK(std::abs(joint_all.z()(0, 0) - 5.0 / 16.0) < 1e-15);

  auto cce = IsCoarseCorrelatedEquilibrium(process.game(), joint_all, 1e-9);
  CHECK(cce.satisfied);
  CHECK(cce.max_violation == doctest::Approx(-0.125));

  // Closed-form epoch accounting: over a pair of epochs the realized rate
  // is 5/8, the best fixed action earns 1/2 per unit time, and the two-bin
  // deviation gains 1/8 per epoch.
  Partition two_bins = Partition::IntervalBins(2);
  auto series = process.RegretSeries(two_bins);
  REQUIRE(series.external.size() == 200);
  for (int pairs = 1; pairs <= 100; ++pairs) {
    int e = 2 * pairs - 1;  // after an even number of epochs
    CHECK(series.external[e] ==
          doctest::Approx(-0.25 * pairs).epsilon(1e-12));
    CHECK(series.mosaic[e] == doctest::Approx(0.25 * pairs).epsilon(1e-12));
  }

  std::vector<double> axis(200);
  for (int e = 0; e < 200; ++e) axis[e] = e + 1.0;
  double ext_slope = LeastSquaresSlope(axis, series.external);
  double mos_slope = LeastSquaresSlope(axis, series.mosaic);
  CHECK(ext_slope < 1e-3);
  CHECK(mos_slope > 0.05);
}

TEST_CASE("band regret telescoping") {
  Game mp = MatchingPennies();
  const double p0 = 0.6, eps = 0.05;

  // Single upward transit: the measurement telescopes to the exact bound.
  {
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.record_stride = 1;
    cfg.horizon = 1.0;
    Trajectory rising(mp, cfg, 2, 2);
    for (int i = 0; i <= 100; ++i) {
      double t = i * 0.01;
      double x1 = 0.4 + 0.4 * t;
      double x[2] = {x1, 1.0 - x1};
      double y[2] = {0.5, 0.5};
      rising.Append(t, {x, 2}, {y, 2});
    }
    auto result = BandRegretBoundCheck(rising, p0, eps, 0);
    CHECK(result.intervals == 1);
    CHECK(result.skipped == 0);
    CHECK(result.measured == doctest::Approx(result.bound));
    CHECK(result.satisfied);
    CHECK(result.bound ==
          doctest::Approx(std::log((p0 + eps) / (p0 - eps))));
  }

  // No visits at all.
  {
    Trajectory flat = ConstantTrajectory(mp, SimplexPoint({0.3, 0.7}),
                                          SimplexPoint({0.5, 0.5}), 1.0, 0.01);
    auto result = BandRegretBoundCheck(flat, p0, eps, 0);
    CHECK(result.intervals == 0);
    CHECK(result.measured == 0.0);
    CHECK(result.satisfied);
  }

  // A visit that turns around inside the band is skipped.
  {
    IntegratorConfig cfg;
    cfg.dt = 0.5;
    cfg.record_stride = 1;
    cfg.horizon = 1.0;
    Trajectory bump(mp, cfg, 2, 2);
    double xs[3] = {0.5, 0.57, 0.5};
    for (int i = 0; i < 3; ++i) {
      double x[2] = {xs[i], 1.0 - xs[i]};
      double y[2] = {0.5, 0.5};
      bump.Append(i * 0.5, {x, 2}, {y, 2});
    }
    auto result = BandRegretBoundCheck(bump, p0, eps, 0);
    CHECK(result.intervals == 0);
    CHECK(result.skipped == 1);
  }

  // Replicator run: many transits stay under the bound, both actions.
  {
    IntegratorConfig cfg;
    cfg.horizon = 2000.0;
    Trajectory orbit = Integrate(mp, SimplexPoint({0.9, 0.1}),
                                 SimplexPoint({0.5, 0.5}), cfg);
    for (int action : {0, 1}) {
      auto result = BandRegretBoundCheck(orbit, p0, eps, action);
      CHECK(result.intervals > 10);
      CHECK(result.satisfied);
    }
  }
}

TEST_CASE("least squares slope") {
  std::vector<double> xs = {1, 2, 3, 4, 5};
  std::vector<double> ys = {2.0, 4.1, 5.9, 8.0, 10.1};
  CHECK(LeastSquaresSlope(xs, ys) == doctest::Approx(2.01).epsilon(0.01));
}

}  // namespace phireg
