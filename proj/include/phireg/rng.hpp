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

#ifndef PHIREG_RNG_HPP_
#define PHIREG_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

#include "phireg/game.hpp"

namespace phireg {

// splitmix64 finalizer; used both as a stream splitter and a seed mixer so
// per-job child streams are reproducible independent of scheduling.
inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent child seed for a (stream, substream) pair.
inline uint64_t ChildSeed(uint64_t master, uint64_t stream,
                          uint64_t substream = 0) {
  return SplitMix64(SplitMix64(master ^ SplitMix64(stream)) ^
                    SplitMix64(substream + 0x51ed270b2f6c87ULL));
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextUint64() { return engine_(); }

  // Uniform in [0, 1) built from the top 53 bits; avoids distribution
  // implementations that vary across standard libraries.
  double NextUniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double NextExponential() {
    // 1 - u in (0, 1], so the log is finite.
    return -std::log(1.0 - NextUniform());
  }

  // Flat Dirichlet sample (normalized unit exponentials).
  Eigen::VectorXd NextSimplex(int n) {
    Eigen::VectorXd v(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      v[i] = NextExponential();
      sum += v[i];
    }
    return v / sum;
  }

 private:
  std::mt19937_64 engine_;
};

// Raises every coordinate to at least `floor` while keeping the unit sum;
// iterates the clamp/renormalize pair until the floor binds exactly.
inline SimplexPoint ClampToFloor(Eigen::VectorXd v, double floor) {
  for (int pass = 0; pass < 64; ++pass) {
    bool changed = false;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (v[i] < floor) {
        v[i] = floor;
        changed = true;
      }
    }
    v /= v.sum();
    if (!changed) break;
    if (v.minCoeff() >= floor * (1.0 - 1e-12)) break;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::max(v[i], floor);
  return SimplexPoint(v / v.sum());
}

// Flat Dirichlet initial strategy with coordinates clamped to >= 0.01.
inline SimplexPoint RandomInteriorStrategy(Rng& rng, int n,
                                           double floor = 0.01) {
  return ClampToFloor(rng.NextSimplex(n), floor);
}

}  // namespace phireg

#endif  // PHIREG_RNG_HPP_
