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

#include "phireg/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace phireg {

DeviationCheck IsCorrelatedEquilibrium(const Game& game,
                                       const JointDistribution& z,
                                       double tol) {
  const Eigen::MatrixXd& a = game.row_payoff();
  const Eigen::MatrixXd& b = game.col_payoff();
  const Eigen::MatrixXd& joint = z.z();
  double worst = -std::numeric_limits<double>::infinity();

  // Row player: conditioned on being told i, compare i against any pure k.
  for (int i = 0; i < game.num_row_actions(); ++i) {
    double mass = joint.row(i).sum();
    if (mass <= 0.0) continue;
    Eigen::VectorXd cond = joint.row(i).transpose() / mass;
    double stay = a.row(i).dot(cond);
    for (int k = 0; k < game.num_row_actions(); ++k) {
      worst = std::max(worst, a.row(k).dot(cond) - stay);
    }
  }
  // Column player, symmetrically.
  for (int j = 0; j < game.num_col_actions(); ++j) {
    double mass = joint.col(j).sum();
    if (mass <= 0.0) continue;
    Eigen::VectorXd cond = joint.col(j) / mass;
    double stay = b.col(j).dot(cond);
    for (int l = 0; l < game.num_col_actions(); ++l) {
      worst = std::max(worst, b.col(l).dot(cond) - stay);
    }
  }
  if (!std::isfinite(worst)) worst = 0.0;  // fully degenerate z
  return {worst <= tol, worst};
}

DeviationCheck IsCoarseCorrelatedEquilibrium(const Game& game,
                                             const JointDistribution& z,
                                             double tol) {
  const Eigen::MatrixXd& a = game.row_payoff();
  const Eigen::MatrixXd& b = game.col_payoff();
  const Eigen::MatrixXd& joint = z.z();

  double realized_row = (a.array() * joint.array()).sum();
  double realized_col = (b.array() * joint.array()).sum();
  Eigen::VectorXd col_marg = z.col_marginal();
  Eigen::VectorXd row_marg = z.row_marginal();

  double worst = (a * col_marg).maxCoeff() - realized_row;
  worst = std::max(worst, (b.transpose() * row_marg).maxCoeff() - realized_col);
  return {worst <= tol, worst};
}

namespace {

// Non-empty subsets of {0..count-1} with the given size, as index lists.
void Subsets(int count, int size, std::vector<std::vector<int>>* out) {
  std::vector<int> current;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(current.size()) == size) {
      out->push_back(current);
      return;
    }
    for (int i = start; i < count; ++i) {
      current.push_back(i);
      rec(i + 1);
      current.pop_back();
    }
  };
  rec(0);
}

// Solves for an opponent mixture supported on `opp_support` making every
// own action in `own_support` indifferent, together with the common payoff
// level. Returns false when the system is singular or the mixture leaves
// the (closed) simplex face.
bool SolveIndifference(const Eigen::MatrixXd& payoff,
                       const std::vector<int>& own_support,
                       const std::vector<int>& opp_support,
                       Eigen::VectorXd* full_mix, double* level) {
  int s = static_cast<int>(own_support.size());
  // Unknowns: mixture weights on the support plus the payoff level.
  Eigen::MatrixXd sys(s + 1, s + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) {
      sys(r, c) = payoff(own_support[r], opp_support[c]);
    }
    sys(r, s) = -1.0;
  }
  for (int c = 0; c < s; ++c) sys(s, c) = 1.0;
  sys(s, s) = 0.0;
  rhs[s] = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
  if (!lu.isInvertible()) return false;
  Eigen::VectorXd sol = lu.solve(rhs);
  if (!sol.allFinite()) return false;

  full_mix->setZero(payoff.cols());
  for (int c = 0; c < s; ++c) {
    if (sol[c] < -1e-10) return false;
    (*full_mix)[opp_support[c]] = std::max(sol[c], 0.0);
  }
  double sum = full_mix->sum();
  if (sum <= 0.0) return false;
  *full_mix /= sum;
  *level = sol[s];
  return true;
}

bool CertifiedNash(const Game& game, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y, double tol = 1e-9) {
  Eigen::VectorXd row_vals = game.row_payoff() * y;
  Eigen::VectorXd col_vals = game.col_payoff().transpose() * x;
  double row_value = x.dot(row_vals);
  double col_value = y.dot(col_vals);
  return row_vals.maxCoeff() <= row_value + tol &&
         col_vals.maxCoeff() <= col_value + tol;
}

}  // namespace

std::vector<std::pair<SimplexPoint, SimplexPoint>> NashSupportEnumeration(
    const Game& game) {
  int n = game.num_row_actions();
  int m = game.num_col_actions();
  if (n > 4 || m > 4) {
    throw std::invalid_argument("support enumeration limited to 4x4 games");
  }
  std::vector<std::pair<SimplexPoint, SimplexPoint>> found;
  int max_size = std::min(n, m);
  for (int size = 1; size <= max_size; ++size) {
    std::vector<std::vector<int>> row_supports, col_supports;
    Subsets(n, size, &row_supports);
    Subsets(m, size, &col_supports);
    for (const auto& rs : row_supports) {
      for (const auto& cs : col_supports) {
        Eigen::VectorXd y, x;
        double row_level = 0.0, col_level = 0.0;
        // y makes the row player's support indifferent; x the column's.
        if (!SolveIndifference(game.row_payoff(), rs, cs, &y, &row_level)) {
          continue;
        }
        if (!SolveIndifference(game.col_payoff().transpose(), cs, rs, &x,
                               &col_level)) {
          continue;
        }
        if (!CertifiedNash(game, x, y)) continue;
        bool duplicate = false;
        for (const auto& [px, py] : found) {
          if ((px.probs() - x).lpNorm<Eigen::Infinity>() < 1e-9 &&
              (py.probs() - y).lpNorm<Eigen::Infinity>() < 1e-9) {
            duplicate = true;
            break;
          }
        }
        if (!duplicate) {
          found.emplace_back(SimplexPoint(x), SimplexPoint(y));
        }
      }
    }
  }
  return found;
}

}  // namespace phireg
