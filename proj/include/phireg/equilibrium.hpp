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

#ifndef PHIREG_EQUILIBRIUM_HPP_
#define PHIREG_EQUILIBRIUM_HPP_

#include <utility>
#include <vector>

#include "phireg/game.hpp"

namespace phireg {

struct DeviationCheck {
  bool satisfied = false;
  // Largest deviation gain found (signed; <= tol when satisfied).
  double max_violation = 0.0;
};

// Correlated-equilibrium check. Pure deviations suffice: the conditional
// payoff is linear in the deviating mixture, so the maximum is at a vertex.
// Rows/columns with zero marginal are skipped (their conditionals are
// undefined and they contribute nothing to the incentive constraints).
DeviationCheck IsCorrelatedEquilibrium(const Game& game,
                                       const JointDistribution& z,
                                       double tol = 1e-9);

// Coarse-correlated-equilibrium check against unconditioned pure deviations.
DeviationCheck IsCoarseCorrelatedEquilibrium(const Game& game,
                                             const JointDistribution& z,
                                             double tol = 1e-9);

// Equal-size support enumeration for small games (both players at most four
// actions). Each candidate solves the linear indifference system on its
// support and is kept only if non-negative and certified against all pure
// deviations. Singular systems are skipped.
std::vector<std::pair<SimplexPoint, SimplexPoint>> NashSupportEnumeration(
    const Game& game);

}  // namespace phireg

#endif  // PHIREG_EQUILIBRIUM_HPP_
