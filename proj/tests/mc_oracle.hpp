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

// Monte-Carlo conditional mean of a component's residual given covariate
// PITs: draws W ~ U(0,1), inverts F(. | x) one tree at a time and maps the
// result through the residual margin's quantile function.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>
#include <random>

#include "copulaboost/component.hpp"

namespace testing_support {

struct McMean {
  double mean = 0.0;
  double se = 0.0;
};

// Inverse of u -> F(u | given) for one edge, by bisection when the
// conditioning variable is discrete.
inline double invert_edge(const copulaboost::copula::BivariateCopula& c,
                          double w, const copulaboost::PitPair& given) {
  if (!given.is_discrete) return c.cond_first_inverse(w, given.u);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const copulaboost::PitPair f = copulaboost::copula::condition_first(
        c, copulaboost::PitPair::continuous(mid), given);
    (f.u < w ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline McMean mc_conditional_mean(const copulaboost::component::Component& comp,
                                  const std::vector<copulaboost::PitPair>& x_pits,
                                  std::size_t draws, std::uint64_t seed) {
  namespace cb = copulaboost;
  const auto chain = cb::dvine::covariate_chain(comp.vine, x_pits);
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double sum = 0.0, sum2 = 0.0;
  const auto& margin = comp.y_margin();
  if (margin.kind() == cb::margins::MarginKind::Rank && margin.rank_continuous()) {
    // The rank quantile is a step function over the sample: order statistic
    // i covers u in ((i-1)/(n+1), i/(n+1)], and the top step extends to 1.
    // Inverting the conditional CDF reduces to a search over its values at
    // the step ends.
    const auto& sample = margin.sample();
    const std::size_t n = sample.size();
    std::vector<double> steps(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = double(i + 1) / double(n + 1);
      steps[i] = cb::dvine::condition_response(comp.vine, cb::PitPair::continuous(u), chain).u;
    }
    for (std::size_t i = 0; i < draws; ++i) {
      const double w = unif(g);
      std::size_t k = std::lower_bound(steps.begin(), steps.end(), w) - steps.begin();
      const double y = sample[std::min(k, n - 1)];
      sum += y;
      sum2 += y * y;
    }
    const double m = sum / double(draws);
    return {m, std::sqrt(std::max(0.0, sum2 / double(draws) - m * m) / double(draws))};
  }
  for (std::size_t i = 0; i < draws; ++i) {
    double w = unif(g);
    for (std::size_t t = chain.size(); t-- > 0;) {
      w = invert_edge(comp.vine.pairs[t][0], w, chain[t]);
    }
    const double y = comp.y_margin().quantile(std::clamp(w, 1e-300, 1.0 - 1e-16));
    sum += y;
    sum2 += y * y;
  }
  const double n = static_cast<double>(draws);
  const double mean = sum / n;
  return {mean, std::sqrt(std::max(0.0, sum2 / n - mean * mean) / n)};
}

}  // namespace testing_support
