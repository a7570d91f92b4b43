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

// Boosting base learners: gamma * clamp(E(Y | x_S), -1, 1) where the
// conditional expectation is taken under a fitted D-vine with Y first.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "copulaboost/dvine.hpp"
#include "copulaboost/margins.hpp"

namespace copulaboost::component {

enum class Mode { Discrete, Binned };

// How the representative value of bin k is chosen: the empirical median of
// the bin (F^-1((2k-1)/(2K))) or the shifted index F^-1(k/K + 1/(2K)).
enum class RepresentativeRule { BinMedian, ShiftedIndex };

inline constexpr std::size_t kDiscreteResidualLimit = 10;
inline constexpr int kDefaultBins = 100;

// Margin of a continuous residual inside the vine: the rank-based empirical
// CDF (consistent with the empirical bin grid) or a moment-fitted Gaussian.
enum class ResidualMargin { Empirical, Gaussian };

std::string_view residual_margin_name(ResidualMargin m);
ResidualMargin parse_residual_margin(std::string_view s);

struct BinGrid {
  std::vector<double> edges;  // y_0 < ... < y_K
  std::vector<double> reps;   // y*_1 .. y*_K
};

// Edges y_0 = -1, y_K = 1 and y_l = F^-1(l/K) in between; duplicate edges
// are merged together with their bins.
BinGrid build_bin_grid(std::span<const double> residuals, int K,
                       RepresentativeRule rule = RepresentativeRule::BinMedian);

struct Component {
  std::vector<std::size_t> subset;  // covariate column ids, vine order
  dvine::DVineModel vine;           // margins[0] is the residual margin
  Mode mode = Mode::Binned;
  std::vector<double> edges;  // binned mode
  std::vector<double> reps;   // binned mode
  std::vector<double> atoms;  // discrete mode, ascending
  double gamma = 1.0;

  const margins::MarginalModel& y_margin() const { return vine.margins[0]; }
  std::size_t size() const { return subset.size(); }

  bool operator==(const Component&) const = default;
};

struct ComponentOptions {
  int bins = kDefaultBins;
  RepresentativeRule rule = RepresentativeRule::BinMedian;
  margins::MarginMode margin_mode = margins::MarginMode::Parametric;
  ResidualMargin residual_margin = ResidualMargin::Empirical;
  std::vector<copula::Family> families = copula::default_candidates();
  double gamma = 1.0;
};

// Fits the residual margin and the D-vine on (residuals, x_S). Residuals with
// at most kDiscreteResidualLimit distinct values use the discrete mode.
// x_columns[j] holds covariate subset[j]; x_margins[j] is its fitted margin.
Component fit_component(std::span<const double> residuals,
                        const std::vector<std::vector<double>>& x_columns,
                        std::vector<margins::MarginalModel> x_margins,
                        std::vector<std::size_t> subset,
                        const ComponentOptions& options,
                        std::vector<std::string>* warnings = nullptr);

// Covariate PITs for the subset, given the values x_S in vine order.
std::vector<PitPair> covariate_pits(const Component& c,
                                    std::span<const double> x_subset);

double expected_value_discrete(const Component& c,
                               std::span<const PitPair> x_pits);
double expected_value_binned(const Component& c,
                             std::span<const PitPair> x_pits);
// Dispatches on the component mode.
double expected_value(const Component& c, std::span<const PitPair> x_pits);

// Bin weights F(y_k | x) - F(y_{k-1} | x), k = 1..K. The outer edges -1 and 1
// bound every residual, so F(y_0 | x) = 0 and F(y_K | x) = 1.
std::vector<double> bin_weights(const Component& c,
                                std::span<const PitPair> x_pits);

double clamp_and_scale(double expectation, double gamma);

// gamma * clamp(E(Y | x_S), -1, 1) for the subset values in vine order.
double evaluate(const Component& c, std::span<const double> x_subset);

// Evaluates every row of a column-major covariate matrix.
std::vector<double> evaluate_rows(const Component& c,
                                  const std::vector<std::vector<double>>& columns);

}  // namespace copulaboost::component
