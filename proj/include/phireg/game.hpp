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

#ifndef PHIREG_GAME_HPP_
#define PHIREG_GAME_HPP_

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace phireg {

enum class Player { kRow, kCol };

// Absolute tolerance used when returning best-response argmax *sets*:
// actions within this of the maximum are reported as ties.
inline constexpr double kTieTolerance = 1e-12;

// A point on the probability simplex. Entries are validated (non-negative,
// summing to one within 1e-9) and then renormalized so the stored vector
// sums to one up to rounding.
class SimplexPoint {
 public:
  explicit SimplexPoint(Eigen::VectorXd probs);
  SimplexPoint(std::initializer_list<double> probs);

  static SimplexPoint Uniform(int n);
  static SimplexPoint Vertex(int n, int index);

  const Eigen::VectorXd& probs() const { return probs_; }
  double operator[](int i) const { return probs_[i]; }
  int size() const { return static_cast<int>(probs_.size()); }
  std::span<const double> span() const {
    return {probs_.data(), static_cast<size_t>(probs_.size())};
  }

  // True when every coordinate is at least `floor`.
  bool interior(double floor = 1e-9) const;

 private:
  Eigen::VectorXd probs_;
};

// Two-player normal-form game: the row player receives row_payoff(i, j) and
// the column player col_payoff(i, j) when actions (i, j) are played.
class Game {
 public:
  Game(Eigen::MatrixXd row_payoff, Eigen::MatrixXd col_payoff);

  int num_row_actions() const { return static_cast<int>(row_payoff_.rows()); }
  int num_col_actions() const { return static_cast<int>(row_payoff_.cols()); }
  const Eigen::MatrixXd& row_payoff() const { return row_payoff_; }
  const Eigen::MatrixXd& col_payoff() const { return col_payoff_; }
  const Eigen::MatrixXd& payoff(Player p) const {
    return p == Player::kRow ? row_payoff_ : col_payoff_;
  }

  std::string ToJsonString() const;
  static Game FromJsonString(const std::string& text);
  static Game Load(const std::string& path);
  void Save(const std::string& path) const;

 private:
  Eigen::MatrixXd row_payoff_;
  Eigen::MatrixXd col_payoff_;
};

// Canonical instances used throughout tests and experiments.
Game MatchingPennies();
// k-action pure coordination: payoff 1 to both players on the diagonal.
Game DiagonalCoordination(int k = 2);
// Zero-sum game (A, -A) from a single payoff matrix.
Game ZeroSumGame(Eigen::MatrixXd row_payoff);

// A joint (possibly correlated) distribution over action profiles.
class JointDistribution {
 public:
  explicit JointDistribution(Eigen::MatrixXd z);
  static JointDistribution Product(const SimplexPoint& x,
                                   const SimplexPoint& y);

  const Eigen::MatrixXd& z() const { return z_; }
  int rows() const { return static_cast<int>(z_.rows()); }
  int cols() const { return static_cast<int>(z_.cols()); }

  Eigen::VectorXd row_marginal() const;  // P(row action)
  Eigen::VectorXd col_marginal() const;  // P(col action)
  // Conditional distribution of the column action given row action i.
  // Requires a positive row marginal at i.
  Eigen::VectorXd col_given_row(int i) const;
  Eigen::VectorXd row_given_col(int j) const;

 private:
  Eigen::MatrixXd z_;
};

// Expected utilities (x'Ay, x'By) of a mixed profile.
std::pair<double, double> Utilities(const Game& game, const SimplexPoint& x,
                                    const SimplexPoint& y);

// Argmax set of pure best responses against `opponent`, with ties resolved
// at kTieTolerance. Indices are sorted ascending.
std::vector<int> BestResponse(const Game& game, Player player,
                              const SimplexPoint& opponent);

// All pure profiles (i, j) where i and j are mutual best responses.
std::vector<std::pair<int, int>> PureNashSet(const Game& game);

struct GenericityReport {
  bool unique_best_responses = false;
  bool row_nondegenerate = false;  // a11 - a12 - a21 + a22 != 0
  bool col_nondegenerate = false;  // b11 - b12 - b21 + b22 != 0
  bool generic() const {
    return unique_best_responses && row_nondegenerate && col_nondegenerate;
  }
};

// Exact-arithmetic genericity flags for a 2x2 game.
GenericityReport GenericityCheck(const Game& game);

enum class GameCase {
  kNoPureNash,      // cyclic best-response structure, interior equilibrium
  kUniquePureNash,  // dominance solvable
  kTwoPureNash,     // coordination-like, two strict pure equilibria
  kNonGeneric,
};

const char* GameCaseName(GameCase c);

// Classifies a 2x2 game by its pure equilibrium count; kNonGeneric when the
// genericity flags fail. Throws std::logic_error if a generic game reports
// more than two pure equilibria (impossible; indicates a bug).
GameCase ClassifyCase(const Game& game);

enum class RescaleKind { kZeroSum, kCoordination };

// Decomposition of a generic 2x2 game (A, B) into a common matrix C with
// B ~ c*C up to per-column shifts of A and per-row shifts of B:
//   A(i,j) = C(i,j) + row_payoff_shift(j) / c
//   B(i,j) = c * C(i,j) - col_payoff_shift(i)
struct RescaleDecomposition {
  double scale = 0.0;  // c; negative: rescaled zero-sum, positive: coordination
  Eigen::MatrixXd common;             // C
  Eigen::VectorXd row_payoff_shift;   // length m, applied per column of A
  Eigen::VectorXd col_payoff_shift;   // length n, applied per row of B
  RescaleKind kind = RescaleKind::kZeroSum;

  Eigen::MatrixXd ReconstructRowPayoff() const;
  Eigen::MatrixXd ReconstructColPayoff() const;
};

// Lemma-style rescaling of a nondegenerate 2x2 game. Throws
// std::invalid_argument when either second difference vanishes.
RescaleDecomposition RescaleDecompose(const Game& game);

// Interior equilibrium of a 2x2 game via the indifference conditions.
// Returns nullopt when either second difference vanishes (no isolated
// interior candidate) or the candidate leaves the open unit interval; the
// returned profile is certified by mutual indifference.
std::optional<std::pair<SimplexPoint, SimplexPoint>> InteriorNash2x2(
    const Game& game);

}  // namespace phireg

#endif  // PHIREG_GAME_HPP_
