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

// Evaluation measures for binary outcomes.

#pragma once

#include <cstddef>
#include <span>

namespace copulaboost::metrics {

inline constexpr double kProbFloor = 1e-12;

struct EvalReport {
  double loglik = 0.0;
  double auc = 0.5;
  double accuracy = 0.0;
  std::size_t n = 0;
};

double logistic(double h);
double logit(double p);

// Sum of y log p + (1 - y) log(1 - p) with p clamped to [1e-12, 1 - 1e-12].
double log_likelihood(std::span<const double> y, std::span<const double> p);
// Same, with p = logistic(h).
double log_likelihood_scores(std::span<const double> y, std::span<const double> h);

// Mann-Whitney AUC with half credit for ties.
double auc(std::span<const double> y, std::span<const double> scores);

double accuracy(std::span<const double> y, std::span<const double> p,
                double threshold = 0.5);

EvalReport evaluate(std::span<const double> y, std::span<const double> p);

}  // namespace copulaboost::metrics
