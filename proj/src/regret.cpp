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

#include "phireg/regret.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace phireg {

Partition Partition::Singleton() {
  Partition p;
  p.scheme_ = Scheme::kSingleton;
  p.num_bins_ = 1;
  return p;
}

Partition Partition::IntervalBins(int k) {
  if (k < 1) throw std::invalid_argument("interval partition needs k >= 1");
  Partition p;
  p.scheme_ = Scheme::kIntervalBins;
  p.num_bins_ = k;
  return p;
}

Partition Partition::KlBands(SimplexPoint center, double ref_divergence,
                             double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("KL band needs eps > 0");
  if (!center.interior(1e-15)) {
    throw std::invalid_argument("KL band center must be interior");
  }
  Partition p;
  p.scheme_ = Scheme::kKlBands;
  p.num_bins_ = 2;
  p.center_ = std::move(center);
  p.ref_divergence_ = ref_divergence;
  p.band_eps_ = eps;
  return p;
}

int Partition::BinOf(std::span<const double> own_strategy) const {
  switch (scheme_) {
    case Scheme::kSingleton:
      return 0;
    case Scheme::kIntervalBins: {
      int bin = static_cast<int>(own_strategy[0] * num_bins_);
      if (bin < 0) bin = 0;
      if (bin >= num_bins_) bin = num_bins_ - 1;
      return bin;
    }
    case Scheme::kKlBands: {
      double d = KlDivergence(own_strategy, center_->span());
      bool inside = d >= ref_divergence_ - band_eps_ &&
                    d <= ref_divergence_ + band_eps_;
      return inside ? 0 : 1;
    }
  }
  return 0;
}

std::string Partition::Describe() const {
  std::ostringstream os;
  switch (scheme_) {
    case Scheme::kSingleton:
      os << "singleton";
      break;
    case Scheme::kIntervalBins:
      os << "interval_bins(" << num_bins_ << ")";
      break;
    case Scheme::kKlBands:
      os << "kl_bands(ref=" << ref_divergence_ << ",eps=" << band_eps_ << ")";
      break;
  }
  return os.str();
}

SwapAccumulator::SwapAccumulator(int num_actions, int num_bins)
    : n_(num_actions), bins_(num_bins) {
  if (num_actions < 1 || num_bins < 1) {
    throw std::invalid_argument("accumulator needs positive dimensions");
  }
  raw_u_.assign(n_, 0.0);
  occupancy_.assign(bins_, 0.0);
  per_bin_.assign(static_cast<size_t>(bins_) * n_ * n_, 0.0);
  total_.assign(static_cast<size_t>(n_) * n_, 0.0);
}

void SwapAccumulator::AddSamplePair(int bin_left,
                                    std::span<const double> own_left,
                                    std::span<const double> own_right,
                                    std::span<const double> u_left,
                                    std::span<const double> u_right,
                                    double dt) {
  double* bin_mat = per_bin_.data() + static_cast<size_t>(bin_left) * n_ * n_;
  const double half_dt = 0.5 * dt;
  double realized_l = 0.0, realized_r = 0.0;
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      // One trapezoid contribution, written identically into the bin and
      // the unrestricted total so a singleton partition stays bit-equal.
      double c = half_dt * (own_left[a] * u_left[b] + own_right[a] * u_right[b]);
      bin_mat[a * n_ + b] += c;
      total_[a * n_ + b] += c;
    }
    realized_l += own_left[a] * u_left[a];
    realized_r += own_right[a] * u_right[a];
  }
  for (int b = 0; b < n_; ++b) {
    raw_u_[b] += half_dt * (u_left[b] + u_right[b]);
  }
  realized_ += half_dt * (realized_l + realized_r);
  occupancy_[bin_left] += dt;
  horizon_ += dt;
}

void SwapAccumulator::AddConstantSegment(int bin, std::span<const double> own,
                                         std::span<const double> u,
                                         double duration) {
  double* bin_mat = per_bin_.data() + static_cast<size_t>(bin) * n_ * n_;
  double realized = 0.0;
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      double c = duration * own[a] * u[b];
      bin_mat[a * n_ + b] += c;
      total_[a * n_ + b] += c;
    }
    realized += own[a] * u[a];
  }
  for (int b = 0; b < n_; ++b) raw_u_[b] += duration * u[b];
  realized_ += duration * realized;
  occupancy_[bin] += duration;
  horizon_ += duration;
}

std::span<const double> SwapAccumulator::bin_matrix(int bin) const {
  return {per_bin_.data() + static_cast<size_t>(bin) * n_ * n_,
          static_cast<size_t>(n_) * n_};
}

void PlayerUtility(const Game& game, Player player, std::span<const double> x,
                   std::span<const double> y, std::span<double> u) {
  const Eigen::MatrixXd& a = game.row_payoff();
  const Eigen::MatrixXd& b = game.col_payoff();
  int n = game.num_row_actions();
  int m = game.num_col_actions();
  if (player == Player::kRow) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += a(i, j) * y[j];
      u[i] = s;
    }
  } else {
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += x[i] * b(i, j);
      u[j] = s;
    }
  }
}

namespace {

// Shared driver for full accumulation and checkpointed series building.
template <typename CheckpointFn>
SwapAccumulator AccumulateImpl(const Trajectory& traj, const Partition& part,
                               Player player, CheckpointFn&& on_sample) {
  size_t samples = traj.num_samples();
  if (samples < 2) {
    throw std::invalid_argument("trajectory must hold at least two samples");
  }
  const Game& game = traj.game();
  int actions = player == Player::kRow ? traj.num_row_actions()
                                       : traj.num_col_actions();
  SwapAccumulator acc(actions, part.num_bins());

  std::vector<double> u_left(actions), u_right(actions);
  PlayerUtility(game, player, traj.x(0), traj.y(0), u_left);
  for (size_t i = 0; i + 1 < samples; ++i) {
    PlayerUtility(game, player, traj.x(i + 1), traj.y(i + 1), u_right);
    auto own_left = player == Player::kRow ? traj.x(i) : traj.y(i);
    auto own_right = player == Player::kRow ? traj.x(i + 1) : traj.y(i + 1);
    double dt = traj.time(i + 1) - traj.time(i);
    acc.AddSamplePair(part.BinOf(own_left), own_left, own_right, u_left,
                      u_right, dt);
    on_sample(acc, i + 1);
    std::swap(u_left, u_right);
  }
  return acc;
}

}  // namespace

SwapAccumulator Accumulate(const Trajectory& traj, const Partition& part,
                           Player player) {
  return AccumulateImpl(traj, part, player,
                        [](const SwapAccumulator&, size_t) {});
}

double ExternalRegret(const SwapAccumulator& acc) {
  double best = -std::numeric_limits<double>::infinity();
  for (double v : acc.raw_utility()) best = std::max(best, v);
  return best - acc.realized();
}

double SwapRegret(const SwapAccumulator& acc) {
  int n = acc.num_actions();
  auto total = acc.total_matrix();
  double value = 0.0;
  for (int a = 0; a < n; ++a) {
    double row_best = total[a * n];
    for (int b = 1; b < n; ++b) row_best = std::max(row_best, total[a * n + b]);
    value += row_best;
  }
  return value - acc.realized();
}

double InternalRegret(const SwapAccumulator& acc) {
  int n = acc.num_actions();
  auto total = acc.total_matrix();
  double identity = 0.0;
  for (int a = 0; a < n; ++a) identity += total[a * n + a];
  double best_gain = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      best_gain = std::max(best_gain, total[a * n + b] - total[a * n + a]);
    }
  }
  return identity + best_gain - acc.realized();
}

double MosaicRegret(const SwapAccumulator& acc) {
  int n = acc.num_actions();
  double value = 0.0;
  for (int k = 0; k < acc.num_bins(); ++k) {
    auto mat = acc.bin_matrix(k);
    for (int a = 0; a < n; ++a) {
      double row_best = mat[a * n];
      for (int b = 1; b < n; ++b) row_best = std::max(row_best, mat[a * n + b]);
      value += row_best;
    }
  }
  return value - acc.realized();
}

RegretReport BuildRegretReport(const Trajectory& traj, const Partition& part,
                               Player player, size_t checkpoint_stride) {
  size_t samples = traj.num_samples();
  if (checkpoint_stride == 0) {
    checkpoint_stride = std::max<size_t>(1, (samples - 1) / 100);
  }
  RegretReport report;
  auto on_sample = [&](const SwapAccumulator& acc, size_t i) {
    if (i % checkpoint_stride == 0 || i + 1 == samples) {
      double t = traj.time(i);
      if (t > 0.0) {
        report.mosaic_time_average.emplace_back(t, MosaicRegret(acc) / t);
      }
    }
  };
  SwapAccumulator acc = AccumulateImpl(traj, part, player, on_sample);

  report.external = ExternalRegret(acc);
  report.internal = InternalRegret(acc);
  report.swap = SwapRegret(acc);
  report.mosaic = MosaicRegret(acc);
  report.horizon = acc.horizon();
  int n = acc.num_actions();
  for (int k = 0; k < acc.num_bins(); ++k) {
    BinDeviation dev;
    dev.bin = k;
    dev.occupancy = acc.occupancy(k);
    auto mat = acc.bin_matrix(k);
    for (int a = 0; a < n; ++a) {
      int best_b = 0;
      for (int b = 1; b < n; ++b) {
        if (mat[a * n + b] > mat[a * n + best_b]) best_b = b;
      }
      dev.best_target.push_back(best_b);
      dev.deviation_value += mat[a * n + best_b];
    }
    report.per_bin.push_back(std::move(dev));
  }
  return report;
}

namespace {

ConditionalAverageSeries ConditionalAverageImpl(
    const Trajectory& traj, Player observer,
    const std::function<bool(std::span<const double>)>& in_band,
    size_t series_stride) {
  size_t samples = traj.num_samples();
  if (samples < 2) {
    throw std::invalid_argument("trajectory must hold at least two samples");
  }
  int opp_dim = observer == Player::kRow ? traj.num_col_actions()
                                         : traj.num_row_actions();
  if (series_stride == 0) {
    series_stride = std::max<size_t>(1, (samples - 1) / 1000);
  }
  ConditionalAverageSeries out;
  Eigen::VectorXd num = Eigen::VectorXd::Zero(opp_dim);
  double den = 0.0;
  for (size_t i = 0; i + 1 < samples; ++i) {
    auto own = observer == Player::kRow ? traj.x(i) : traj.y(i);
    if (in_band(own)) {
      auto opp_l = observer == Player::kRow ? traj.y(i) : traj.x(i);
      auto opp_r = observer == Player::kRow ? traj.y(i + 1) : traj.x(i + 1);
      double dt = traj.time(i + 1) - traj.time(i);
      for (int c = 0; c < opp_dim; ++c) {
        num[c] += 0.5 * dt * (opp_l[c] + opp_r[c]);
      }
      den += dt;
      ++out.sample_count;
    }
    size_t right = i + 1;
    if ((right % series_stride == 0 || right + 1 == samples) && den > 0.0) {
      out.times.push_back(traj.time(right));
      out.means.push_back(num / den);
    }
  }
  out.occupancy = den;
  out.empty = den <= 0.0;
  if (!out.empty) out.final_mean = num / den;
  return out;
}

}  // namespace

ConditionalAverageSeries EmpiricalConditionalAverage(const Trajectory& traj,
                                                     double sigma, double eps,
                                                     Player observer) {
  if (!(eps > 0.0)) throw std::invalid_argument("band needs eps > 0");
  auto in_band = [sigma, eps](std::span<const double> own) {
    return own[0] >= sigma - eps && own[0] <= sigma + eps;
  };
  return ConditionalAverageImpl(traj, observer, in_band, 0);
}

ConditionalAverageSeries EmpiricalConditionalAverageKl(
    const Trajectory& traj, const SimplexPoint& center, double ref_divergence,
    double eps, Player observer) {
  if (!(eps > 0.0)) throw std::invalid_argument("band needs eps > 0");
  auto in_band = [&center, ref_divergence, eps](std::span<const double> own) {
    double d = KlDivergence(own, center.span());
    return d >= ref_divergence - eps && d <= ref_divergence + eps;
  };
  return ConditionalAverageImpl(traj, observer, in_band, 0);
}

SimplexPoint PredictedConditionalAverage(const Game& game,
                                         const Trajectory& orbit,
                                         double sigma) {
  if (game.num_row_actions() != 2 || game.num_col_actions() != 2) {
    throw std::invalid_argument("prediction implemented for 2x2 games");
  }
  auto period = DetectPeriod(orbit, 1e-4);
  if (!period.has_value()) {
    throw std::domain_error("trajectory does not look periodic");
  }

  struct Crossing {
    Eigen::VectorXd nu;
    double speed = 0.0;
  };
  std::vector<Crossing> crossings;
  size_t samples = orbit.num_samples();
  double t_stop = *period + 0.5 * orbit.sample_dt();
  for (size_t i = 0; i + 1 < samples && orbit.time(i) <= t_stop; ++i) {
    double l = orbit.x(i)[0] - sigma;
    double r = orbit.x(i + 1)[0] - sigma;
    if ((l > 0 && r > 0) || (l < 0 && r < 0)) continue;
    if (l == 0.0 && r == 0.0) continue;
    double s = l / (l - r);
    Eigen::VectorXd nu(2);
    nu[0] = orbit.y(i)[0] + s * (orbit.y(i + 1)[0] - orbit.y(i)[0]);
    nu[1] = 1.0 - nu[0];
    SimplexPoint x({sigma, 1.0 - sigma});
    SimplexPoint y(nu);
    auto [dx, dy] = RdVectorField(game, x, y);
    double speed = std::abs(dx[0]);
    if (speed < 1e-10) {
      throw std::domain_error("tangential crossing: |dx_1| < 1e-10 at sigma");
    }
    bool duplicate = false;
    for (const auto& c : crossings) {
      if (std::abs(c.nu[0] - nu[0]) < 1e-4) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) crossings.push_back({std::move(nu), speed});
  }
  if (crossings.empty()) {
    throw std::domain_error("sigma is outside the orbit's range");
  }
  if (crossings.size() == 1) {
    // A single distinct crossing only happens at a tangency.
    throw std::domain_error("sigma touches the orbit tangentially");
  }
  if (crossings.size() > 2) {
    throw std::domain_error("more than two distinct crossings found");
  }
  double w1 = 1.0 / crossings[0].speed;
  double w2 = 1.0 / crossings[1].speed;
  Eigen::VectorXd pred =
      (w1 * crossings[0].nu + w2 * crossings[1].nu) / (w1 + w2);
  return SimplexPoint(pred);
}

AlternatingCceProcess::AlternatingCceProcess(double epoch_len, double horizon)
    : game_(DiagonalCoordination(2)), epoch_len_(epoch_len) {
  if (!(epoch_len > 0.0) || !(horizon > 0.0)) {
    throw std::invalid_argument("epoch length and horizon must be positive");
  }
  num_epochs_ = static_cast<int>(std::floor(horizon / epoch_len + 1e-9));
  if (num_epochs_ < 1) {
    throw std::invalid_argument("horizon shorter than one epoch");
  }
}

SimplexPoint AlternatingCceProcess::StrategyAtEpoch(int epoch) const {
  return epoch % 2 == 0 ? SimplexPoint({0.75, 0.25})
                        : SimplexPoint({0.25, 0.75});
}

JointDistribution AlternatingCceProcess::EmpiricalJoint(int epochs) const {
  if (epochs < 1 || epochs > num_epochs_) {
    throw std::invalid_argument("invalid epoch count");
  }
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(2, 2);
  for (int e = 0; e < epochs; ++e) {
    SimplexPoint s = StrategyAtEpoch(e);
    z += s.probs() * s.probs().transpose();
  }
  z /= static_cast<double>(epochs);
  return JointDistribution(z);
}

AlternatingCceProcess::EpochSeries AlternatingCceProcess::RegretSeries(
    const Partition& part) const {
  EpochSeries series;
  SwapAccumulator acc(2, part.num_bins());
  std::vector<double> u(2);
  for (int e = 0; e < num_epochs_; ++e) {
    SimplexPoint s = StrategyAtEpoch(e);
    // Both players use the same mixture; with identity payoffs the row
    // player's utility vector equals the opponent's mixture.
    PlayerUtility(game_, Player::kRow, s.span(), s.span(), u);
    acc.AddConstantSegment(part.BinOf(s.span()), s.span(), u, epoch_len_);
    series.external.push_back(ExternalRegret(acc));
    series.mosaic.push_back(MosaicRegret(acc));
  }
  return series;
}

BandRegretResult BandRegretBoundCheck(const Trajectory& traj, double p0,
                                      double eps, int action,
                                      double tolerance) {
  if (traj.num_row_actions() != 2) {
    throw std::invalid_argument("band regret is a two-action check");
  }
  if (!(eps > 0.0) || !(p0 - eps > 0.0) || !(p0 + eps < 1.0)) {
    throw std::invalid_argument("band must sit strictly inside (0, 1)");
  }
  if (action != 0 && action != 1) {
    throw std::invalid_argument("action must be 0 or 1");
  }
  const double lo = p0 - eps;
  const double hi = p0 + eps;
  auto action_coord = [action](double x1) {
    return action == 0 ? x1 : 1.0 - x1;
  };

  BandRegretResult result;
  result.bound =
      std::abs(std::log(action_coord(hi)) - std::log(action_coord(lo)));

  size_t samples = traj.num_samples();
  bool inside = traj.x(0)[0] > lo && traj.x(0)[0] < hi;
  double entry_value = inside ? action_coord(traj.x(0)[0]) : 0.0;
  int entry_edge = -1;  // -1: started inside; 0: entered at lo; 1: at hi

  for (size_t i = 0; i + 1 < samples; ++i) {
    double xl = traj.x(i)[0];
    double xr = traj.x(i + 1)[0];
    // Edge crossings within this segment, ordered along it.
    struct Event {
      double s;
      int edge;
    };
    std::vector<Event> events;
    for (int e = 0; e < 2; ++e) {
      double edge = e == 0 ? lo : hi;
      double fl = xl - edge;
      double fr = xr - edge;
      if ((fl > 0 && fr <= 0) || (fl <= 0 && fr > 0)) {
        events.push_back({fl / (fl - fr), e});
      }
    }
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.s < b.s; });
    for (const Event& ev : events) {
      double edge = ev.edge == 0 ? lo : hi;
      if (!inside) {
        inside = true;
        entry_edge = ev.edge;
        entry_value = action_coord(edge);
      } else {
        inside = false;
        if (entry_edge >= 0 && entry_edge == ev.edge) {
          ++result.skipped;  // non-transversal: exits where it entered
        } else {
          result.measured +=
              std::log(action_coord(edge)) - std::log(entry_value);
          ++result.intervals;
        }
      }
    }
  }
  if (inside) {
    double final_x1 = traj.x(samples - 1)[0];
    result.measured +=
        std::log(action_coord(final_x1)) - std::log(entry_value);
    ++result.intervals;
  }
  result.satisfied = result.measured <= result.bound + tolerance;
  return result;
}

double LeastSquaresSlope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope needs two aligned series");
  }
  double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("degenerate abscissa");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace phireg
