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

#include "phireg/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace phireg {

Trajectory::Trajectory(Game game, IntegratorConfig config, int n, int m)
    : game_(std::move(game)), config_(config), n_(n), m_(m) {}

SimplexPoint Trajectory::x_point(size_t i) const {
  auto s = x(i);
  return SimplexPoint(Eigen::Map<const Eigen::VectorXd>(s.data(), n_));
}

SimplexPoint Trajectory::y_point(size_t i) const {
  auto s = y(i);
  return SimplexPoint(Eigen::Map<const Eigen::VectorXd>(s.data(), m_));
}

void Trajectory::Append(double t, std::span<const double> x,
                        std::span<const double> y) {
  times_.push_back(t);
  data_.insert(data_.end(), x.begin(), x.end());
  data_.insert(data_.end(), y.begin(), y.end());
}

void Trajectory::Reserve(size_t samples) {
  times_.reserve(samples);
  data_.reserve(samples * (n_ + m_));
}

void RdVectorFieldRaw(const Eigen::MatrixXd& row_payoff,
                      const Eigen::MatrixXd& col_payoff,
                      std::span<const double> x, std::span<const double> y,
                      std::span<double> dx, std::span<double> dy) {
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(y.size());
  double u_row[8], u_col[8];
  // u_row = A y, u_col = x' B; plain ascending loops keep the arithmetic
  // order identical for the two players, so exactly symmetric games stay
  // exactly symmetric under integration.
  double avg_row = 0.0;
  for (int i = 0; i < n; ++i) {
    double u = 0.0;
    for (int j = 0; j < m; ++j) u += row_payoff(i, j) * y[j];
    u_row[i] = u;
    avg_row += x[i] * u;
  }
  double avg_col = 0.0;
  for (int j = 0; j < m; ++j) {
    double u = 0.0;
    for (int i = 0; i < n; ++i) u += x[i] * col_payoff(i, j);
    u_col[j] = u;
    avg_col += y[j] * u;
  }
  for (int i = 0; i < n; ++i) dx[i] = x[i] * (u_row[i] - avg_row);
  for (int j = 0; j < m; ++j) dy[j] = y[j] * (u_col[j] - avg_col);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> RdVectorField(
    const Game& game, const SimplexPoint& x, const SimplexPoint& y) {
  int n = game.num_row_actions();
  int m = game.num_col_actions();
  if (x.size() != n || y.size() != m) {
    throw std::invalid_argument("strategy dimensions do not match game");
  }
  if (n > 8 || m > 8) {
    throw std::invalid_argument("vector field limited to 8 actions per player");
  }
  Eigen::VectorXd dx(n), dy(m);
  RdVectorFieldRaw(game.row_payoff(), game.col_payoff(), x.span(), y.span(),
                   {dx.data(), static_cast<size_t>(n)},
                   {dy.data(), static_cast<size_t>(m)});
  return {std::move(dx), std::move(dy)};
}

namespace {

// Clamp to the interior floor and renormalize to unit sum. Returns false if
// the vector is not renormalizable (non-finite or non-positive mass).
bool Project(double* v, int n, double floor) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (v[i] < floor) v[i] = floor;
    sum += v[i];
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) return false;
  double inv = 1.0 / sum;
  for (int i = 0; i < n; ++i) v[i] *= inv;
  return true;
}

}  // namespace

Trajectory Integrate(const Game& game, const SimplexPoint& x0,
                     const SimplexPoint& y0, const IntegratorConfig& config) {
  const int n = game.num_row_actions();
  const int m = game.num_col_actions();
  if (n > 8 || m > 8) {
    throw std::invalid_argument("integrator limited to 8 actions per player");
  }
  if (x0.size() != n || y0.size() != m) {
    throw std::invalid_argument("initial strategies do not match game");
  }
  if (!(config.dt > 0.0) || !(config.horizon > 0.0) ||
      config.record_stride < 1) {
    throw std::invalid_argument("invalid integrator configuration");
  }
  if (!x0.interior(config.interior_floor) ||
      !y0.interior(config.interior_floor)) {
    throw std::invalid_argument("initial strategies must be strictly interior");
  }

  const int d = n + m;
  long long steps = std::llround(config.horizon / config.dt);
  if (steps < 1) steps = 1;
  // Round up so the horizon lands exactly on a recorded sample.
  long long stride = config.record_stride;
  steps = ((steps + stride - 1) / stride) * stride;

  Trajectory traj(game, config, n, m);
  traj.Reserve(static_cast<size_t>(steps / stride) + 1);

  double s[16], k1[16], k2[16], k3[16], k4[16], tmp[16];
  for (int i = 0; i < n; ++i) s[i] = x0[i];
  for (int j = 0; j < m; ++j) s[n + j] = y0[j];

  const Eigen::MatrixXd& a = game.row_payoff();
  const Eigen::MatrixXd& b = game.col_payoff();
  auto eval = [&](const double* state, double* deriv) {
    RdVectorFieldRaw(a, b, {state, static_cast<size_t>(n)},
                     {state + n, static_cast<size_t>(m)},
                     {deriv, static_cast<size_t>(n)},
                     {deriv + n, static_cast<size_t>(m)});
  };

  traj.Append(0.0, {s, static_cast<size_t>(n)}, {s + n, static_cast<size_t>(m)});
  const double dt = config.dt;
  for (long long step = 0; step < steps; ++step) {
    eval(s, k1);
    for (int i = 0; i < d; ++i) tmp[i] = s[i] + 0.5 * dt * k1[i];
    eval(tmp, k2);
    for (int i = 0; i < d; ++i) tmp[i] = s[i] + 0.5 * dt * k2[i];
    eval(tmp, k3);
    for (int i = 0; i < d; ++i) tmp[i] = s[i] + dt * k3[i];
    eval(tmp, k4);
    for (int i = 0; i < d; ++i) {
      s[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if (!Project(s, n, config.interior_floor) ||
        !Project(s + n, m, config.interior_floor)) {
      throw std::runtime_error("non-finite state at integration step " +
                               std::to_string(step + 1));
    }
    if ((step + 1) % stride == 0) {
      traj.Append(static_cast<double>(step + 1) * dt,
                  {s, static_cast<size_t>(n)},
                  {s + n, static_cast<size_t>(m)});
    }
  }
  return traj;
}

double KlDivergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("KL divergence needs equal dimensions");
  }
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;  // 0 ln 0 = 0
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

double KlDivergence(const SimplexPoint& p, const SimplexPoint& q) {
  return KlDivergence(p.span(), q.span());
}

InvariantEvaluator::InvariantEvaluator(const Game& game)
    : x_star_(SimplexPoint::Uniform(2)), y_star_(SimplexPoint::Uniform(2)),
      scale_(0.0) {
  auto nash = InteriorNash2x2(game);
  if (!nash.has_value()) {
    throw std::invalid_argument(
        "invariant undefined: game has no interior equilibrium");
  }
  x_star_ = nash->first;
  y_star_ = nash->second;
  scale_ = RescaleDecompose(game).scale;
}

double InvariantEvaluator::operator()(std::span<const double> x,
                                      std::span<const double> y) const {
  return KlDivergence(x_star_.span(), x) - KlDivergence(y_star_.span(), y) / scale_;
}

double InvariantEvaluator::operator()(const SimplexPoint& x,
                                      const SimplexPoint& y) const {
  return (*this)(x.span(), y.span());
}

double InvariantValue(const Game& game, const SimplexPoint& x,
                      const SimplexPoint& y) {
  return InvariantEvaluator(game)(x, y);
}

double InvariantSeries::MaxDrift(const std::vector<double>& times,
                                 double t_max) const {
  double drift = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (t_max >= 0.0 && times[i] > t_max + 1e-12) break;
    drift = std::max(drift, std::abs(values[i] - values[0]));
  }
  return drift;
}

InvariantSeries InvariantAlong(const Trajectory& traj) {
  InvariantEvaluator inv(traj.game());
  InvariantSeries series;
  series.weight_scale = inv.scale();
  series.values.reserve(traj.num_samples());
  for (size_t i = 0; i < traj.num_samples(); ++i) {
    series.values.push_back(inv(traj.x(i), traj.y(i)));
  }
  return series;
}

namespace {

// Sup-norm distance from `ref` to the segment p + t (q - p), t in [0, 1].
// The objective max_c |p_c + t d_c| is convex in t, so a ternary search
// converges to the minimum.
double SegmentMinDistance(const std::vector<double>& p,
                          const std::vector<double>& q,
                          const std::vector<double>& ref, double* t_best) {
  size_t c = ref.size();
  auto dist_at = [&](double t) {
    double worst = 0.0;
    for (size_t i = 0; i < c; ++i) {
      double v = std::abs((p[i] + t * (q[i] - p[i])) - ref[i]);
      if (v > worst) worst = v;
    }
    return worst;
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    double m1 = lo + (hi - lo) / 3.0;
    double m2 = hi - (hi - lo) / 3.0;
    if (dist_at(m1) <= dist_at(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  *t_best = 0.5 * (lo + hi);
  double best = dist_at(*t_best);
  // Endpoints are candidates too (ternary search is open on the interior).
  double d0 = dist_at(0.0), d1 = dist_at(1.0);
  if (d0 < best) { best = d0; *t_best = 0.0; }
  if (d1 < best) { best = d1; *t_best = 1.0; }
  return best;
}

}  // namespace

std::optional<double> DetectPeriod(const Trajectory& traj, double eps,
                                   double t_min) {
  size_t samples = traj.num_samples();
  if (samples < 3) return std::nullopt;
  if (t_min < 0.0) t_min = 10.0 * traj.sample_dt();

  const bool reduced =
      traj.num_row_actions() == 2 && traj.num_col_actions() == 2;
  auto coords = [&](size_t i) {
    std::vector<double> v;
    if (reduced) {
      v = {traj.x(i)[0], traj.y(i)[0]};
    } else {
      auto xs = traj.x(i);
      auto ys = traj.y(i);
      v.assign(xs.begin(), xs.end());
      v.insert(v.end(), ys.begin(), ys.end());
    }
    return v;
  };

  const std::vector<double> ref = coords(0);
  auto dist_to_ref = [&](const std::vector<double>& v) {
    double worst = 0.0;
    for (size_t i = 0; i < ref.size(); ++i) {
      worst = std::max(worst, std::abs(v[i] - ref[i]));
    }
    return worst;
  };

  bool armed = false;
  std::vector<double> prev = ref;
  double prev_dist = 0.0;
  for (size_t k = 1; k < samples; ++k) {
    std::vector<double> cur = coords(k);
    double cur_dist = dist_to_ref(cur);
    double t_left = traj.time(k - 1);
    if (armed && t_left >= t_min) {
      // Cheap gate before the segment search: the segment cannot come
      // closer than the nearer endpoint distance minus its own length.
      double seg_len = 0.0;
      for (size_t i = 0; i < ref.size(); ++i) {
        seg_len = std::max(seg_len, std::abs(cur[i] - prev[i]));
      }
      if (std::min(prev_dist, cur_dist) < eps + seg_len) {
        double t_frac = 0.0;
        double d = SegmentMinDistance(prev, cur, ref, &t_frac);
        if (d < eps) {
          double t = t_left + t_frac * (traj.time(k) - t_left);
          if (t > t_min) return t;
        }
      }
    }
    if (cur_dist > eps) armed = true;
    prev = std::move(cur);
    prev_dist = cur_dist;
  }
  return std::nullopt;
}

}  // namespace phireg
