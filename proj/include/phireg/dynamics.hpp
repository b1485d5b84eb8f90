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

#ifndef PHIREG_DYNAMICS_HPP_
#define PHIREG_DYNAMICS_HPP_

#include <optional>
#include <span>
#include <vector>

#include "phireg/game.hpp"

namespace phireg {

struct IntegratorConfig {
  double dt = 1e-3;        // fixed step size
  double horizon = 1000.0; // total integrated time
  int record_stride = 10;  // keep every record_stride-th step
  double interior_floor = 1e-12;  // post-step clamp before renormalizing
};

// Uniformly sampled joint-strategy time series produced by Integrate().
// Samples are stored flat as (x_1..x_n, y_1..y_m) per row.
class Trajectory {
 public:
  Trajectory(Game game, IntegratorConfig config, int n, int m);

  const Game& game() const { return game_; }
  const IntegratorConfig& config() const { return config_; }
  int num_row_actions() const { return n_; }
  int num_col_actions() const { return m_; }
  size_t num_samples() const { return times_.size(); }
  double time(size_t i) const { return times_[i]; }
  const std::vector<double>& times() const { return times_; }
  // Spacing between recorded samples (dt * record_stride).
  double sample_dt() const { return config_.dt * config_.record_stride; }

  std::span<const double> x(size_t i) const {
    return {data_.data() + i * (n_ + m_), static_cast<size_t>(n_)};
  }
  std::span<const double> y(size_t i) const {
    return {data_.data() + i * (n_ + m_) + n_, static_cast<size_t>(m_)};
  }
  SimplexPoint x_point(size_t i) const;
  SimplexPoint y_point(size_t i) const;

  void Append(double t, std::span<const double> x, std::span<const double> y);
  void Reserve(size_t samples);

 private:
  Game game_;
  IntegratorConfig config_;
  int n_, m_;
  std::vector<double> times_;
  std::vector<double> data_;
};

// Replicator vector field: each action's share grows with its payoff edge
// over the current mixture. Components of dx (and dy) sum to zero.
void RdVectorFieldRaw(const Eigen::MatrixXd& row_payoff,
                      const Eigen::MatrixXd& col_payoff,
                      std::span<const double> x, std::span<const double> y,
                      std::span<double> dx, std::span<double> dy);

std::pair<Eigen::VectorXd, Eigen::VectorXd> RdVectorField(
    const Game& game, const SimplexPoint& x, const SimplexPoint& y);

// Classical fixed-step RK4 with a clamp-and-renormalize projection after
// every step; strictly interior initial conditions required. Throws
// std::runtime_error (with the step index) if the state turns non-finite.
Trajectory Integrate(const Game& game, const SimplexPoint& x0,
                     const SimplexPoint& y0, const IntegratorConfig& config);

// Kullback-Leibler divergence sum_i p_i ln(p_i/q_i), with 0 ln 0 = 0 and a
// +infinity sentinel when q vanishes where p does not.
double KlDivergence(std::span<const double> p, std::span<const double> q);
double KlDivergence(const SimplexPoint& p, const SimplexPoint& q);

// Conserved quantity of replicator flow in a nondegenerate 2x2 game with an
// interior equilibrium (x*, y*):
//   J(x, y) = KL(x* || x) - (1/c) KL(y* || y)
// where c is the rescaling weight. For c < 0 this is a positively weighted
// sum, for c > 0 a weighted difference.
class InvariantEvaluator {
 public:
  explicit InvariantEvaluator(const Game& game);  // throws without interior NE

  double operator()(const SimplexPoint& x, const SimplexPoint& y) const;
  double operator()(std::span<const double> x, std::span<const double> y) const;

  const SimplexPoint& row_equilibrium() const { return x_star_; }
  const SimplexPoint& col_equilibrium() const { return y_star_; }
  double scale() const { return scale_; }

 private:
  SimplexPoint x_star_;
  SimplexPoint y_star_;
  double scale_;
};

double InvariantValue(const Game& game, const SimplexPoint& x,
                      const SimplexPoint& y);

// J sampled at every recorded state of a trajectory.
struct InvariantSeries {
  std::vector<double> values;
  double weight_scale = 0.0;  // the c used in the weighted divergence

  // Largest excursion from the initial value over times up to t_max
  // (whole series when t_max < 0).
  double MaxDrift(const std::vector<double>& times, double t_max = -1.0) const;
};

InvariantSeries InvariantAlong(const Trajectory& traj);

// Smallest time t > t_min at which the trajectory re-enters an eps-ball
// (sup-norm) around its initial state, measured on the reduced coordinates
// (x_1, y_1) for 2x2 games and on the full state otherwise. The trajectory
// must first leave the ball ("arming"), which excludes rest points. The
// return time is refined by minimizing the distance along the bracketing
// linear segment. t_min < 0 selects the default of 10 sample spacings.
std::optional<double> DetectPeriod(const Trajectory& traj, double eps,
                                   double t_min = -1.0);

}  // namespace phireg

#endif  // PHIREG_DYNAMICS_HPP_
