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

// D-vines with a fixed variable order. Variable 0 is the response; tree t
// (0-based) has one edge per e = 0..d-t-2 coupling variables e and e+t+1
// given the t variables between them.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "copulaboost/copula.hpp"
#include "copulaboost/margins.hpp"
#include "copulaboost/pit.hpp"

namespace copulaboost::dvine {

struct DVineModel {
  std::vector<std::vector<copula::BivariateCopula>> pairs;  // pairs[t][e]
  std::vector<margins::MarginalModel> margins;              // per variable

  std::size_t dim() const { return margins.size(); }
  std::size_t covariate_count() const { return dim() - 1; }

  bool operator==(const DVineModel&) const = default;
};

// Sequential (tree by tree) fit on already transformed data. pits[v][i] is
// the PIT of variable v at row i.
std::vector<std::vector<copula::BivariateCopula>> fit_pairs(
    const std::vector<std::vector<PitPair>>& pits,
    std::span<const copula::Family> candidates,
    std::vector<std::string>* warnings = nullptr);

// columns[v][i]; margins are fixed and only used for the PIT.
DVineModel fit_dvine(const std::vector<std::vector<double>>& columns,
                     std::vector<margins::MarginalModel> margins,
                     std::span<const copula::Family> candidates,
                     std::vector<std::string>* warnings = nullptr);

// chain[t] = F(x_{t+1} | x_1..x_t) for t = 0..L-1, from the covariate PITs.
std::vector<PitPair> covariate_chain(const DVineModel& m,
                                     std::span<const PitPair> x_pits);

// F(y | x) and F(y- | x) given a precomputed covariate chain.
PitPair condition_response(const DVineModel& m, const PitPair& y_pit,
                           std::span<const PitPair> chain);

// condition_response for a fixed chain, prepared once and applied to many
// response values.
class ResponseMap {
 public:
  ResponseMap(const DVineModel& m, std::span<const PitPair> chain);

  PitPair operator()(const PitPair& y_pit) const;

 private:
  std::vector<copula::FirstConditional> steps_;
};

double conditional_cdf(const DVineModel& m, const PitPair& y_pit,
                       std::span<const PitPair> x_pits);

}  // namespace copulaboost::dvine
