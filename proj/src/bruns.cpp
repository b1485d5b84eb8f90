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

#include "phireg/bruns.hpp"

#include <stdexcept>

namespace phireg {

namespace {

struct BasisEntry {
  const char* code;
  const char* long_name;
  double payoff[2][2];
};

constexpr BasisEntry kBasisTable[12] = {
    {"Ch", "Chicken", {{2, 3}, {1, 4}}},
    {"Ba", "Battle", {{3, 2}, {1, 4}}},
    {"Hr", "Hero", {{3, 1}, {2, 4}}},
    {"Cm", "Compromise", {{2, 1}, {3, 4}}},
    {"Dl", "Deadlock", {{1, 2}, {3, 4}}},
    {"Pd", "Prisoner's dilemma", {{1, 3}, {2, 4}}},
    {"Sh", "Stag hunt", {{1, 4}, {2, 3}}},
    {"As", "Assurance", {{1, 4}, {3, 2}}},
    {"Co", "Coordination", {{2, 4}, {3, 1}}},
    {"Pc", "Peace", {{3, 4}, {2, 1}}},
    {"Ha", "Harmony", {{3, 4}, {1, 2}}},
    {"Nc", "Concord", {{2, 4}, {1, 3}}},
};

}  // namespace

const char* BrunsBasisCode(BrunsBasis basis) {
  return kBasisTable[static_cast<int>(basis)].code;
}

const char* BrunsBasisLongName(BrunsBasis basis) {
  return kBasisTable[static_cast<int>(basis)].long_name;
}

BrunsBasis BrunsBasisFromCode(const std::string& code) {
  for (int i = 0; i < 12; ++i) {
    if (code == kBasisTable[i].code) return static_cast<BrunsBasis>(i);
  }
  throw std::invalid_argument("unknown basis code: " + code);
}

Eigen::Matrix2d BasisPayoffs(BrunsBasis basis) {
  const BasisEntry& e = kBasisTable[static_cast<int>(basis)];
  Eigen::Matrix2d m;
  m << e.payoff[0][0], e.payoff[0][1], e.payoff[1][0], e.payoff[1][1];
  return m;
}

Eigen::MatrixXd AntiDiagonalTranspose(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("anti-diagonal transpose needs a square matrix");
  }
  Eigen::Index n = m.rows();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = m(n - 1 - j, n - 1 - i);
    }
  }
  return out;
}

std::string BrunsGameId::name() const {
  return std::string(BrunsBasisCode(row_code)) + "x" + BrunsBasisCode(col_code);
}

Game BuildBrunsGame(const BrunsGameId& id) {
  Eigen::MatrixXd a = BasisPayoffs(id.row_code);
  Eigen::MatrixXd b = AntiDiagonalTranspose(BasisPayoffs(id.col_code));
  return Game(std::move(a), std::move(b));
}

std::vector<std::pair<BrunsGameId, Game>> EnumerateBrunsGames() {
  std::vector<std::pair<BrunsGameId, Game>> out;
  out.reserve(144);
  for (BrunsBasis row : kAllBrunsBases) {
    for (BrunsBasis col : kAllBrunsBases) {
      BrunsGameId id{row, col};
      out.emplace_back(id, BuildBrunsGame(id));
    }
  }
  return out;
}

}  // namespace phireg
