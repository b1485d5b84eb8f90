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

#ifndef PHIREG_BRUNS_HPP_
#define PHIREG_BRUNS_HPP_

#include <array>
#include <string>
#include <vector>

#include "phireg/game.hpp"

namespace phireg {

// Twelve ordinal 2x2 basis payoffs (each a permutation of {1,2,3,4}),
// identified by their conventional two-letter codes.
enum class BrunsBasis { Ch, Ba, Hr, Cm, Dl, Pd, Sh, As, Co, Pc, Ha, Nc };

inline constexpr std::array<BrunsBasis, 12> kAllBrunsBases = {
    BrunsBasis::Ch, BrunsBasis::Ba, BrunsBasis::Hr, BrunsBasis::Cm,
    BrunsBasis::Dl, BrunsBasis::Pd, BrunsBasis::Sh, BrunsBasis::As,
    BrunsBasis::Co, BrunsBasis::Pc, BrunsBasis::Ha, BrunsBasis::Nc};

const char* BrunsBasisCode(BrunsBasis basis);
const char* BrunsBasisLongName(BrunsBasis basis);
BrunsBasis BrunsBasisFromCode(const std::string& code);  // throws on unknown

// Row-player payoff matrix of a basis game.
Eigen::Matrix2d BasisPayoffs(BrunsBasis basis);

// Transpose along the anti-diagonal: swaps the two main-diagonal entries
// and fixes the anti-diagonal. An involution.
Eigen::MatrixXd AntiDiagonalTranspose(const Eigen::MatrixXd& m);

struct BrunsGameId {
  BrunsBasis row_code;
  BrunsBasis col_code;
  // Compact name such as "BaxAs" (row basis x column basis).
  std::string name() const;
};

// Row payoff from the row basis; column payoff is the anti-diagonal
// transpose of the column basis.
Game BuildBrunsGame(const BrunsGameId& id);

// All 144 pairings, row-major in the canonical basis order, starting at
// Ch x Ch.
std::vector<std::pair<BrunsGameId, Game>> EnumerateBrunsGames();

}  // namespace phireg

#endif  // PHIREG_BRUNS_HPP_
