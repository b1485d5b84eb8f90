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
#include "phireg/dynamics.hpp"
#include "phireg/rng.hpp"

namespace phireg {
namespace {

Game BrunsPair(const char* row, const char* col) {
  return BuildBrunsGame({BrunsBasisFromCode(row), BrunsBasisFromCode(col)});
}

double MaxAbs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Independent KL evaluation: reverse iteration with Kahan compensation.
double KlOracle(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  double sum = 0.0, comp = 0.0;
  for (Eigen::Index i = p.size() - 1; i >= 0; --i) {
    if (p[i] <= 0.0) continue;
    double term = p[i] * (std::log(p[i]) - std::log(q[i]));
    double t = sum + (term + comp);
    comp = (term + comp) - (t - sum);
    sum = t;
  }
  return sum;
}

}  // namespace

TEST_CASE("vector field values") {
  Game mp = MatchingPennies();
  auto [dx0, dy0] = RdVectorField(mp, SimplexPoint::Uniform(2),
                                  SimplexPoint::Uniform(2));
  CHECK(dx0.lpNorm<Eigen::Infinity>() < 1e-15);
  CHECK(dy0.lpNorm<Eigen::Infinity>() < 1e-15);

  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      auto [dx, dy] = RdVectorField(mp, SimplexPoint::Vertex(2, i),
                                    SimplexPoint::Vertex(2, j));
      CHECK(dx.lpNorm<Eigen::Infinity>() == 0.0);
      CHECK(dy.lpNorm<Eigen::Infinity>() == 0.0);
    }
  }

  // Row indifferent against the mixed column, column pushed by the skew.
  auto [dx, dy] = RdVectorField(mp, SimplexPoint({0.9, 0.1}),
                                SimplexPoint({0.5, 0.5}));
  CHECK(dx.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(dy[0] == doctest::Approx(-0.4));
  CHECK(dy[1] == doctest::Approx(0.4));
}

TEST_CASE("vector field components sum to zero") {
  Rng rng(3);
  Eigen::MatrixXd a3(3, 3);
  a3 << 0, -1, 2, 1, 0, -1, -2, 1, 0;
  Game rps = ZeroSumGame(a3);
  for (int trial = 0; trial < 50; ++trial) {
    SimplexPoint x(rng.NextSimplex(3));
    SimplexPoint y(rng.NextSimplex(3));
    auto [dx, dy] = RdVectorField(rps, x, y);
    CHECK(std::abs(dx.sum()) < 1e-12);
    CHECK(std::abs(dy.sum()) < 1e-12);
  }
}

TEST_CASE("integration holds rest points and the simplex") {
  Game mp = MatchingPennies();
  IntegratorConfig cfg;
  cfg.horizon = 10.0;
  Trajectory rest = Integrate(mp, SimplexPoint::Uniform(2),
                              SimplexPoint::Uniform(2), cfg);
  double dev = 0.0;
  for (size_t i = 0; i < rest.num_samples(); ++i) {
    dev = std::max(dev, std::abs(rest.x(i)[0] - 0.5));
    dev = std::max(dev, std::abs(rest.y(i)[0] - 0.5));
  }
  CHECK(dev < 1e-10);

  cfg.horizon = 50.0;
  Trajectory orbit =
      Integrate(mp, SimplexPoint({0.9, 0.1}), SimplexPoint({0.5, 0.5}), cfg);
  for (size_t i = 0; i < orbit.num_samples(); ++i) {
    double sx = orbit.x(i)[0] + orbit.x(i)[1];
    double sy = orbit.y(i)[0] + orbit.y(i)[1];
    CHECK(std::abs(sx - 1.0) < 1e-10);
    CHECK(std::abs(sy - 1.0) < 1e-10);
  }
  // Uniform sample spacing.
  for (size_t i = 1; i < orbit.num_samples(); ++i) {
    CHECK(orbit.time(i) - orbit.time(i - 1) ==
          doctest::Approx(orbit.sample_dt()).epsilon(1e-12));
  }
}

TEST_CASE("integrator is fourth order") {
  Game mp = MatchingPennies();
  SimplexPoint x0({0.8, 0.2}), y0({0.4, 0.6});

  auto final_state = [&](double dt) {
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.horizon = 5.0;
    cfg.record_stride = 1;
    Trajectory traj = Integrate(mp, x0, y0, cfg);
    size_t last = traj.num_samples() - 1;
    return std::array<double, 2>{traj.x(last)[0], traj.y(last)[0]};
  };

  auto reference = final_state(5e-4);
  auto coarse = final_state(4e-3);
  auto fine = final_state(2e-3);
  double e_coarse = std::max(std::abs(coarse[0] - reference[0]),
                             std::abs(coarse[1] - reference[1]));
  double e_fine = std::max(std::abs(fine[0] - reference[0]),
                           std::abs(fine[1] - reference[1]));
  REQUIRE(e_coarse > 0.0);
  REQUIRE(e_fine > 0.0);
  double ratio = e_coarse / e_fine;
  // Fourth order gives ~16, adjusted slightly by the dt/8 reference.
  CHECK(ratio > 10.0);
  CHECK(ratio < 26.0);
}

TEST_CASE("integrator rejects exploding states") {
  Eigen::MatrixXd a(2, 2);
  a << 1e308, -1e308, -1e308, 1e308;
  Game huge = ZeroSumGame(a);
  IntegratorConfig cfg;
  cfg.dt = 1.0;
  cfg.horizon = 10.0;
  cfg.record_stride = 1;
  CHECK_THROWS_AS(Integrate(huge, SimplexPoint({0.6, 0.4}),
                            SimplexPoint({0.3, 0.7}), cfg),
                  std::runtime_error);
}

TEST_CASE("KL divergence") {
  SimplexPoint p({0.25, 0.5, 0.25});
  CHECK(KlDivergence(p, p) == doctest::Approx(0.0));
  CHECK(KlDivergence(SimplexPoint({1.0, 0.0}), SimplexPoint({0.5, 0.5})) ==
        doctest::Approx(std::log(2.0)));
  CHECK(std::isinf(
      KlDivergence(SimplexPoint({0.5, 0.5}), SimplexPoint({1.0, 0.0}))));

  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd a = rng.NextSimplex(3);
    Eigen::VectorXd b = rng.NextSimplex(3);
    double lib = KlDivergence(SimplexPoint(a), SimplexPoint(b));
    CHECK(lib == doctest::Approx(KlOracle(a, b)).epsilon(1e-12));
    CHECK(lib >= -1e-15);
  }
  CHECK(KlDivergence(p, SimplexPoint::Uniform(3)) ==
        doctest::Approx(KlOracle(p.probs(),
                                 SimplexPoint::Uniform(3).probs())));
}

TEST_CASE("invariant value") {
  Game mp = MatchingPennies();
  InvariantEvaluator inv(mp);
  CHECK(inv(SimplexPoint::Uniform(2), SimplexPoint::Uniform(2)) ==
        doctest::Approx(0.0));
  CHECK(inv.scale() == doctest::Approx(-1.0));

  // Zero-sum weight reduces to the plain divergence sum, so J >= 0.
  SimplexPoint x({0.7, 0.3}), y({0.2, 0.8});
  double j = inv(x, y);
  CHECK(j == doctest::Approx(KlDivergence(SimplexPoint::Uniform(2), x) +
                             KlDivergence(SimplexPoint::Uniform(2), y)));
  CHECK(j > 0.0);

  CHECK_THROWS_AS(InvariantEvaluator(BrunsPair("Ch", "Cm")),
                  std::invalid_argument);
}

TEST_CASE("conservation along a cyclic orbit") {
  Game mp = MatchingPennies();
  IntegratorConfig cfg;
  cfg.horizon = 60.0;
  Trajectory traj =
      Integrate(mp, SimplexPoint({0.9, 0.1}), SimplexPoint({0.5, 0.5}), cfg);
  auto period = DetectPeriod(traj, 1e-4);
  REQUIRE(period.has_value());

  InvariantSeries series = InvariantAlong(traj);
  CHECK(series.weight_scale == doctest::Approx(-1.0));
  CHECK(series.MaxDrift(traj.times(), *period) < 1e-6);
}

TEST_CASE("period detection") {
  IntegratorConfig cfg;
  cfg.horizon = 200.0;

  // Cyclic pairing: period exists.
  Game cyclic = BrunsPair("Ch", "Sh");
  REQUIRE(ClassifyCase(cyclic) == GameCase::kNoPureNash);
  Trajectory orbit = Integrate(cyclic, SimplexPoint({0.3, 0.7}),
                               SimplexPoint({0.6, 0.4}), cfg);
  auto period = DetectPeriod(orbit, 1e-4);
  REQUIRE(period.has_value());
  CHECK(*period > 1.0);

  // Dominance solvable: converges, never returns.
  Game solvable = BrunsPair("Ch", "Cm");
  REQUIRE(ClassifyCase(solvable) == GameCase::kUniquePureNash);
  Trajectory conv = Integrate(solvable, SimplexPoint({0.3, 0.7}),
                              SimplexPoint({0.6, 0.4}), cfg);
  CHECK_FALSE(DetectPeriod(conv, 1e-4).has_value());

  // Rest point: the arming requirement rejects the constant trajectory.
  IntegratorConfig short_cfg;
  short_cfg.horizon = 10.0;
  Game mp = MatchingPennies();
  Trajectory rest = Integrate(mp, SimplexPoint::Uniform(2),
                              SimplexPoint::Uniform(2), short_cfg);
  CHECK_FALSE(DetectPeriod(rest, 1e-4).has_value());
}

TEST_CASE("trajectories are shift invariant") {
  Game g = BrunsPair("Ba", "As");
  Eigen::MatrixXd a = g.row_payoff();
  Eigen::MatrixXd b = g.col_payoff();
  for (int i = 0; i < 2; ++i) {
    a(i, 0) += 2.5;
    a(i, 1) -= 1.25;
    b(0, i) += 0.75;
    b(1, i) -= 3.5;
  }
  Game shifted(a, b);

  IntegratorConfig cfg;
  cfg.horizon = 100.0;
  SimplexPoint x0({0.35, 0.65}), y0({0.55, 0.45});
  Trajectory t0 = Integrate(g, x0, y0, cfg);
  Trajectory t1 = Integrate(shifted, x0, y0, cfg);
  REQUIRE(t0.num_samples() == t1.num_samples());
  double gap = 0.0;
  for (size_t i = 0; i < t0.num_samples(); ++i) {
    gap = std::max(gap, std::abs(t0.x(i)[0] - t1.x(i)[0]));
    gap = std::max(gap, std::abs(t0.y(i)[0] - t1.y(i)[0]));
  }
  CHECK(gap < 1e-8);
}

TEST_CASE("dominance-solvable games converge to the pure equilibrium") {
  Game solvable = BrunsPair("Ch", "Cm");
  auto pure = PureNashSet(solvable);
  REQUIRE(pure.size() == 1);
  auto [pi, pj] = pure[0];

  IntegratorConfig cfg;
  cfg.horizon = 1000.0;
  Trajectory traj = Integrate(solvable, SimplexPoint({0.4, 0.6}),
                              SimplexPoint({0.7, 0.3}), cfg);
  auto dist = [&](size_t s) {
    double dx = std::abs(traj.x(s)[pi] - 1.0);
    double dy = std::abs(traj.y(s)[pj] - 1.0);
    return std::max(dx, dy);
  };
  size_t last = traj.num_samples() - 1;
  CHECK(dist(last) < 1e-3);
  // Eventually monotone: decreasing across the final half of the run.
  bool monotone = true;
  for (size_t i = traj.num_samples() / 2; i < last; ++i) {
    if (dist(i + 1) > dist(i) + 1e-12) monotone = false;
  }
  CHECK(monotone);
}

TEST_CASE("integrator rounds the horizon up to a full sample") {
  Game mp = MatchingPennies();
  IntegratorConfig cfg;
  cfg.dt = 1e-2;
  cfg.horizon = 0.55;  // 55 steps, stride 10 -> rounded to 60
  Trajectory traj = Integrate(mp, SimplexPoint({0.6, 0.4}),
                              SimplexPoint({0.5, 0.5}), cfg);
  CHECK(traj.num_samples() == 7);
  CHECK(traj.time(traj.num_samples() - 1) == doctest::Approx(0.6));
}

}  // namespace phireg
