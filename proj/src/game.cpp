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

#include "phireg/game.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace phireg {

namespace {

void CheckFinite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + " has non-finite entries");
  }
}

}  // namespace

SimplexPoint::SimplexPoint(Eigen::VectorXd probs) : probs_(std::move(probs)) {
  if (probs_.size() < 1) {
    throw std::invalid_argument("simplex point needs at least one coordinate");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    double v = probs_[i];
    if (!std::isfinite(v) || v < -1e-12) {
      throw std::invalid_argument("simplex coordinates must be non-negative");
    }
    if (v < 0.0) probs_[i] = 0.0;
    sum += probs_[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("simplex coordinates must sum to one");
  }
  probs_ /= sum;
}

SimplexPoint::SimplexPoint(std::initializer_list<double> probs)
    : SimplexPoint(Eigen::Map<const Eigen::VectorXd>(
          probs.begin(), static_cast<Eigen::Index>(probs.size()))) {}

SimplexPoint SimplexPoint::Uniform(int n) {
  return SimplexPoint(Eigen::VectorXd::Constant(n, 1.0 / n));
}

SimplexPoint SimplexPoint::Vertex(int n, int index) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v[index] = 1.0;
  return SimplexPoint(std::move(v));
}

bool SimplexPoint::interior(double floor) const {
  return probs_.minCoeff() >= floor;
}

Game::Game(Eigen::MatrixXd row_payoff, Eigen::MatrixXd col_payoff)
    : row_payoff_(std::move(row_payoff)), col_payoff_(std::move(col_payoff)) {
  if (row_payoff_.rows() != col_payoff_.rows() ||
      row_payoff_.cols() != col_payoff_.cols()) {
    throw std::invalid_argument("payoff matrices must share dimensions");
  }
  if (row_payoff_.rows() < 2 || row_payoff_.cols() < 2) {
    throw std::invalid_argument("each player needs at least two actions");
  }
  CheckFinite(row_payoff_, "row payoff");
  CheckFinite(col_payoff_, "col payoff");
}

std::string Game::ToJsonString() const {
  nlohmann::json j;
  auto to_rows = [](const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> rows(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      rows[i].assign(m.row(i).begin(), m.row(i).end());
    }
    return rows;
  };
  j["row_payoff"] = to_rows(row_payoff_);
  j["col_payoff"] = to_rows(col_payoff_);
  return j.dump(2);
}

Game Game::FromJsonString(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  auto to_matrix = [](const nlohmann::json& rows) {
    if (!rows.is_array() || rows.empty()) {
      throw std::invalid_argument("payoff must be a non-empty array of rows");
    }
    Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    Eigen::Index m = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd out(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (static_cast<Eigen::Index>(rows[i].size()) != m) {
        throw std::invalid_argument("ragged payoff rows");
      }
      for (Eigen::Index jx = 0; jx < m; ++jx) {
        out(i, jx) = rows[i][jx].get<double>();
      }
    }
    return out;
  };
  if (!j.contains("row_payoff") || !j.contains("col_payoff")) {
    throw std::invalid_argument("game json needs row_payoff and col_payoff");
  }
  return Game(to_matrix(j["row_payoff"]), to_matrix(j["col_payoff"]));
}

Game Game::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open game file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return FromJsonString(buf.str());
}

void Game::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write game file: " + path);
  out << ToJsonString() << "\n";
}

Game MatchingPennies() {
  Eigen::MatrixXd a(2, 2);
  a << 1, -1, -1, 1;
  return ZeroSumGame(a);
}

Game DiagonalCoordination(int k) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k);
  return Game(a, a);
}

Game ZeroSumGame(Eigen::MatrixXd row_payoff) {
  Eigen::MatrixXd b = -row_payoff;
  return Game(std::move(row_payoff), std::move(b));
}

JointDistribution::JointDistribution(Eigen::MatrixXd z) : z_(std::move(z)) {
  CheckFinite(z_, "joint distribution");
  if (z_.minCoeff() < -1e-12) {
    throw std::invalid_argument("joint distribution entries must be >= 0");
  }
  double sum = z_.sum();
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("joint distribution must sum to one");
  }
}

JointDistribution JointDistribution::Product(const SimplexPoint& x,
                                             const SimplexPoint& y) {
  return JointDistribution(x.probs() * y.probs().transpose());
}

Eigen::VectorXd JointDistribution::row_marginal() const {
  return z_.rowwise().sum();
}

Eigen::VectorXd JointDistribution::col_marginal() const {
  return z_.colwise().sum().transpose();
}

Eigen::VectorXd JointDistribution::col_given_row(int i) const {
  Eigen::VectorXd row = z_.row(i).transpose();
  double mass = row.sum();
  if (mass <= 0.0) {
    throw std::domain_error("conditional undefined: zero row marginal");
  }
  return row / mass;
}

Eigen::VectorXd JointDistribution::row_given_col(int j) const {
  Eigen::VectorXd col = z_.col(j);
  double mass = col.sum();
  if (mass <= 0.0) {
    throw std::domain_error("conditional undefined: zero col marginal");
  }
  return col / mass;
}

std::pair<double, double> Utilities(const Game& game, const SimplexPoint& x,
                                    const SimplexPoint& y) {
  if (x.size() != game.num_row_actions() ||
      y.size() != game.num_col_actions()) {
    throw std::invalid_argument("strategy dimensions do not match game");
  }
  double u_row = x.probs().dot(game.row_payoff() * y.probs());
  double u_col = x.probs().dot(game.col_payoff() * y.probs());
  return {u_row, u_col};
}

std::vector<int> BestResponse(const Game& game, Player player,
                              const SimplexPoint& opponent) {
  Eigen::VectorXd values;
  if (player == Player::kRow) {
    if (opponent.size() != game.num_col_actions()) {
      throw std::invalid_argument("opponent strategy has wrong dimension");
    }
    values = game.row_payoff() * opponent.probs();
  } else {
    if (opponent.size() != game.num_row_actions()) {
      throw std::invalid_argument("opponent strategy has wrong dimension");
    }
    values = game.col_payoff().transpose() * opponent.probs();
  }
  double best = values.maxCoeff();
  std::vector<int> argmax;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] >= best - kTieTolerance) argmax.push_back(static_cast<int>(i));
  }
  return argmax;
}

std::vector<std::pair<int, int>> PureNashSet(const Game& game) {
  const Eigen::MatrixXd& a = game.row_payoff();
  const Eigen::MatrixXd& b = game.col_payoff();
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < game.num_row_actions(); ++i) {
    for (int j = 0; j < game.num_col_actions(); ++j) {
      bool row_ok = true;
      for (int k = 0; k < game.num_row_actions(); ++k) {
        if (a(k, j) > a(i, j) + kTieTolerance) {
          row_ok = false;
          break;
        }
      }
      if (!row_ok) continue;
      bool col_ok = true;
      for (int l = 0; l < game.num_col_actions(); ++l) {
        if (b(i, l) > b(i, j) + kTieTolerance) {
          col_ok = false;
          break;
        }
      }
      if (col_ok) out.emplace_back(i, j);
    }
  }
  return out;
}

GenericityReport GenericityCheck(const Game& game) {
  if (game.num_row_actions() != 2 || game.num_col_actions() != 2) {
    throw std::invalid_argument("genericity check expects a 2x2 game");
  }
  const Eigen::MatrixXd& a = game.row_payoff();
  const Eigen::MatrixXd& b = game.col_payoff();
  GenericityReport report;
  // Unique pure best responses against every opposing pure action, with
  // exact comparisons: payoffs in the catalogs are small integers.
  report.unique_best_responses = true;
  for (int j = 0; j < 2; ++j) {
    if (a(0, j) == a(1, j)) report.unique_best_responses = false;
  }
  for (int i = 0; i < 2; ++i) {
    if (b(i, 0) == b(i, 1)) report.unique_best_responses = false;
  }
  report.row_nondegenerate = (a(0, 0) - a(0, 1) - a(1, 0) + a(1, 1)) != 0.0;
  report.col_nondegenerate = (b(0, 0) - b(0, 1) - b(1, 0) + b(1, 1)) != 0.0;
  return report;
}

const char* GameCaseName(GameCase c) {
  switch (c) {
    case GameCase::kNoPureNash: return "no_pure_nash";
    case GameCase::kUniquePureNash: return "unique_pure_nash";
    case GameCase::kTwoPureNash: return "two_pure_nash";
    case GameCase::kNonGeneric: return "non_generic";
  }
  return "?";
}

GameCase ClassifyCase(const Game& game) {
  if (game.num_row_actions() != 2 || game.num_col_actions() != 2) {
    throw std::invalid_argument("case classification expects a 2x2 game");
  }
  if (!GenericityCheck(game).generic()) return GameCase::kNonGeneric;
  size_t count = PureNashSet(game).size();
  switch (count) {
    case 0: return GameCase::kNoPureNash;
    case 1: return GameCase::kUniquePureNash;
    case 2: return GameCase::kTwoPureNash;
    default:
      throw std::logic_error("generic 2x2 game with >2 pure equilibria");
  }
}

Eigen::MatrixXd RescaleDecomposition::ReconstructRowPayoff() const {
  Eigen::MatrixXd a = common;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    a.col(j).array() += row_payoff_shift[j] / scale;
  }
  return a;
}

Eigen::MatrixXd RescaleDecomposition::ReconstructColPayoff() const {
  Eigen::MatrixXd b = scale * common;
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    b.row(i).array() -= col_payoff_shift[i];
  }
  return b;
}

RescaleDecomposition RescaleDecompose(const Game& game) {
  if (game.num_row_actions() != 2 || game.num_col_actions() != 2) {
    throw std::invalid_argument("rescale decomposition expects a 2x2 game");
  }
  const Eigen::MatrixXd& a = game.row_payoff();
  const Eigen::MatrixXd& b = game.col_payoff();
  double da = a(0, 0) - a(0, 1) - a(1, 0) + a(1, 1);
  double db = b(0, 0) - b(0, 1) - b(1, 0) + b(1, 1);
  if (da == 0.0 || db == 0.0) {
    throw std::invalid_argument(
        "rescale decomposition undefined for degenerate games");
  }
  double c = db / da;
  // Difference matrix with vanishing second difference splits into
  // per-row and per-column shift terms.
  Eigen::MatrixXd d = c * a - b;
  Eigen::VectorXd u(2), v(2);
  for (int i = 0; i < 2; ++i) u[i] = d(i, 1);
  for (int j = 0; j < 2; ++j) v[j] = d(1, j) - d(1, 1);

  RescaleDecomposition out;
  out.scale = c;
  out.kind = c < 0 ? RescaleKind::kZeroSum : RescaleKind::kCoordination;
  out.common.resize(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.common(i, j) = a(i, j) - v[j] / c;
    }
  }
  out.row_payoff_shift = v;
  out.col_payoff_shift = u;
  return out;
}

std::optional<std::pair<SimplexPoint, SimplexPoint>> InteriorNash2x2(
    const Game& game) {
  if (game.num_row_actions() != 2 || game.num_col_actions() != 2) {
    throw std::invalid_argument("interior equilibrium expects a 2x2 game");
  }
  const Eigen::MatrixXd& a = game.row_payoff();
  const Eigen::MatrixXd& b = game.col_payoff();
  double da = a(0, 0) - a(0, 1) - a(1, 0) + a(1, 1);
  double db = b(0, 0) - b(0, 1) - b(1, 0) + b(1, 1);
  // Degenerate second differences leave no isolated interior candidate.
  if (da == 0.0 || db == 0.0) return std::nullopt;
  // The opponent-indifference conditions pin each mixture uniquely.
  double x1 = (b(1, 1) - b(1, 0)) / db;
  double y1 = (a(1, 1) - a(0, 1)) / da;
  if (!(x1 > 0.0 && x1 < 1.0 && y1 > 0.0 && y1 < 1.0)) return std::nullopt;
  SimplexPoint x({x1, 1.0 - x1});
  SimplexPoint y({y1, 1.0 - y1});
  // Certify: both players indifferent between their two actions.
  Eigen::VectorXd row_vals = a * y.probs();
  Eigen::VectorXd col_vals = b.transpose() * x.probs();
  if (std::abs(row_vals[0] - row_vals[1]) > 1e-9 ||
      std::abs(col_vals[0] - col_vals[1]) > 1e-9) {
    throw std::logic_error("indifference certificate failed");
  }
  return std::make_pair(std::move(x), std::move(y));
}

}  // namespace phireg
