// Copyright 2026 The copulaboost Authors.
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

#pragma once

#include <algorithm>

namespace copulaboost {

// Pseudo-observations are kept away from the boundary of the unit interval,
// where copula densities are unbounded.
inline constexpr double kUnitEps = 1e-10;

inline double clamp_unit(double u) {
  return std::clamp(u, kUnitEps, 1.0 - kUnitEps);
}

// Probability integral transform of one value. For a discrete variable
// `u_minus` is the left limit F(x-); for a continuous one it equals `u`.
struct PitPair {
  double u = 0.5;
  double u_minus = 0.5;
  bool is_discrete = false;

  static PitPair continuous(double u) { return {u, u, false}; }
  static PitPair discrete(double u, double u_minus) {
    return {u, u_minus, true};
  }
};

}  // namespace copulaboost
