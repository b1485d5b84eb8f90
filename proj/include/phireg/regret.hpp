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

#ifndef PHIREG_REGRET_HPP_
#define PHIREG_REGRET_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phireg/dynamics.hpp"
#include "phireg/game.hpp"

namespace phireg {

// Finite measurable partition of a player's mixed-strategy simplex. Bins are
// indexed 0..num_bins-1 and membership is decided from the player's own
// strategy vector:
//  - Singleton: one bin covering everything.
//  - IntervalBins(k): k half-open intervals on the first coordinate,
//    [0,1/k), ..., [(k-1)/k, 1]; the final bin is closed above.
//  - KlBands(center, ref, eps): bin 0 is the shell of points whose
//    divergence KL(x || center) lies in [ref-eps, ref+eps], bin 1 the rest.
class Partition {
 public:
  enum class Scheme { kSingleton, kIntervalBins, kKlBands };

  static Partition Singleton();
  static Partition IntervalBins(int k);
  static Partition KlBands(SimplexPoint center, double ref_divergence,
                           double eps);

  int num_bins() const { return num_bins_; }
  Scheme scheme() const { return scheme_; }
  int BinOf(std::span<const double> own_strategy) const;
  std::string Describe() const;

  // KL-band accessors (only meaningful for the kKlBands scheme).
  double ref_divergence() const { return ref_divergence_; }
  double band_eps() const { return band_eps_; }

 private:
  Partition() = default;
  Scheme scheme_ = Scheme::kSingleton;
  int num_bins_ = 1;
  std::optional<SimplexPoint> center_;
  double ref_divergence_ = 0.0;
  double band_eps_ = 0.0;
};

// Integrals needed by every regret notion, shared so that the hierarchy
// inequalities hold up to rounding rather than quadrature mismatch:
//   bin_matrix(k)[a][b]  = integral of x_a u_b over times with x in bin k
//   total_matrix()[a][b] = same without the bin restriction
//   raw_utility()[b]     = integral of u_b
//   realized()           = integral of <x, u>
// Sampled trajectories use trapezoids at the recording stride, with each
// trapezoid assigned to the bin of its left sample. Piecewise-constant
// play can be added exactly via AddConstantSegment.
class SwapAccumulator {
 public:
  SwapAccumulator(int num_actions, int num_bins);

  void AddSamplePair(int bin_left, std::span<const double> own_left,
                     std::span<const double> own_right,
                     std::span<const double> u_left,
                     std::span<const double> u_right, double dt);
  void AddConstantSegment(int bin, std::span<const double> own,
                          std::span<const double> u, double duration);

  int num_actions() const { return n_; }
  int num_bins() const { return bins_; }
  double horizon() const { return horizon_; }
  double realized() const { return realized_; }
  const std::vector<double>& raw_utility() const { return raw_u_; }
  double occupancy(int bin) const { return occupancy_[bin]; }
  // Row-major n x n views.
  std::span<const double> bin_matrix(int bin) const;
  std::span<const double> total_matrix() const { return total_; }

 private:
  int n_ = 0;
  int bins_ = 0;
  double horizon_ = 0.0;
  double realized_ = 0.0;
  std::vector<double> raw_u_;
  std::vector<double> occupancy_;
  std::vector<double> per_bin_;  // bins x n x n
  std::vector<double> total_;    // n x n
};

// Utility vector the player experiences at a sample: A y for the row
// player, B' x for the column player.
void PlayerUtility(const Game& game, Player player, std::span<const double> x,
                   std::span<const double> y, std::span<double> u);

// Quadrature pass over a recorded trajectory.
SwapAccumulator Accumulate(const Trajectory& traj, const Partition& part,
                           Player player);

// Best fixed action in hindsight versus realized utility.
double ExternalRegret(const SwapAccumulator& acc);
// Best action-to-action remapping (row-max reduction of the total matrix).
double SwapRegret(const SwapAccumulator& acc);
// Remappings changing at most one action.
double InternalRegret(const SwapAccumulator& acc);
// Per-bin best remapping, summed across bins. With a singleton partition
// this is arithmetically identical to SwapRegret. The per-bin maximum over
// all maps affine on the bin is attained at a pure vertex-to-vertex map:
// the deviation value is linear in the map, and the extreme points of the
// affine simplex self-maps are exactly the lifted pure swap functions.
double MosaicRegret(const SwapAccumulator& acc);

struct BinDeviation {
  int bin = 0;
  double occupancy = 0.0;
  std::vector<int> best_target;  // per action, argmax deviation target
  double deviation_value = 0.0;  // sum over actions of the best entry
};

struct RegretReport {
  double external = 0.0;
  double internal = 0.0;
  double swap = 0.0;
  double mosaic = 0.0;
  double horizon = 0.0;
  std::vector<BinDeviation> per_bin;
  // (t, mosaic_regret_up_to_t / t) at checkpoint samples.
  std::vector<std::pair<double, double>> mosaic_time_average;
};

// Full report over a trajectory; the running mosaic series is evaluated
// every `checkpoint_stride` samples (and always at the final sample).
RegretReport BuildRegretReport(const Trajectory& traj, const Partition& part,
                               Player player, size_t checkpoint_stride = 0);

// Running time-average of the opponent's strategy restricted to the times
// the observer's own strategy lies in a band. `undefined` stays true until
// the band is first visited.
struct ConditionalAverageSeries {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> means;
  Eigen::VectorXd final_mean;
  double occupancy = 0.0;   // total time spent in the band
  size_t sample_count = 0;  // trapezoids contributing
  bool empty = true;
};

// Band on the observer's first coordinate: [sigma - eps, sigma + eps].
ConditionalAverageSeries EmpiricalConditionalAverage(const Trajectory& traj,
                                                     double sigma, double eps,
                                                     Player observer);
// Band on KL(own || center) as used by the KL-shell partitions.
ConditionalAverageSeries EmpiricalConditionalAverageKl(
    const Trajectory& traj, const SimplexPoint& center, double ref_divergence,
    double eps, Player observer);

// Closed-form prediction of the banded time average for a periodic 2x2
// orbit: the two crossings of x_1 = sigma contribute their opponent
// strategies weighted by inverse crossing speed,
//   (nu_1 / |v_1| + nu_2 / |v_2|) / (1 / |v_1| + 1 / |v_2|).
// Throws std::domain_error when sigma is outside the orbit's range or a
// crossing is tangential.
SimplexPoint PredictedConditionalAverage(const Game& game,
                                         const Trajectory& periodic_orbit,
                                         double sigma);

// Deterministic alternating strategy process on the 2x2 diagonal
// coordination game: on even epochs both players mix (3/4, 1/4), on odd
// epochs (1/4, 3/4). The long-run joint distribution is a coarse
// correlated equilibrium, yet per-epoch play is never a best response, so
// bin-conditioned regret grows linearly. All integrals are piecewise
// constant and computed exactly.
class AlternatingCceProcess {
 public:
  AlternatingCceProcess(double epoch_len, double horizon);

  const Game& game() const { return game_; }
  int num_epochs() const { return num_epochs_; }
  double epoch_len() const { return epoch_len_; }
  SimplexPoint StrategyAtEpoch(int epoch) const;

  // Time average of the joint play distribution over the first `epochs`
  // epochs, exact in floating point.
  JointDistribution EmpiricalJoint(int epochs) const;

  struct EpochSeries {
    // Cumulative regret of the row player after each completed epoch.
    std::vector<double> external;
    std::vector<double> mosaic;
  };
  EpochSeries RegretSeries(const Partition& part) const;

 private:
  Game game_;
  double epoch_len_;
  int num_epochs_;
};

struct BandRegretResult {
  double measured = 0.0;
  double bound = 0.0;
  int intervals = 0;       // band-visit intervals included
  int skipped = 0;         // non-transversal visits excluded
  bool satisfied = false;  // measured <= bound + tolerance
};

// Regret of the banded replicator coordinate against fixed action `action`,
// restricted to times with x_1 in (p0 - eps, p0 + eps). By the replicator
// log identity the regret over one visit equals the log-ratio of p_action
// at exit and entry, so the measurement telescopes over transversal visits
// and stays below ln((q + eps) / (q - eps)) for the banded action's edge
// values q. Visits entering and exiting on the same side are skipped, as
// are too-short boundary grazings.
BandRegretResult BandRegretBoundCheck(const Trajectory& traj, double p0,
                                      double eps, int action,
                                      double tolerance = 1e-6);

// Ordinary least-squares slope of y against x.
double LeastSquaresSlope(std::span<const double> x, std::span<const double> y);

}  // namespace phireg

#endif  // PHIREG_REGRET_HPP_
