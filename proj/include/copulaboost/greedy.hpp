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

// Fast covariate selection under an all-Gaussian vine approximation.

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "copulaboost/margins.hpp"

namespace copulaboost::greedy {

inline constexpr int kDefaultPolyDegree = 4;

// F^-1(u) ~ coeffs[0] + sum_j coeffs[j] * Phi^-1(u)^j.
struct QuantilePoly {
  std::vector<double> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator()(double z) const;
};

// Least squares of the residuals on powers of Phi^-1(rank / (n + 1)).
QuantilePoly fit_quantile_poly(std::span<const double> residuals, int degree);

// E[Z^j], j = 0..m, for Z ~ N(mu, sigma^2).
std::vector<double> normal_moments(double mu, double sigma, int m);

// E[F^-1(Phi(Z))] under the polynomial for Z ~ N(mu, sigma^2).
double poly_mean(const QuantilePoly& p, double mu, double sigma);

// Conditional mean given one Gaussian pair with correlation rho and
// conditioning PIT u_cond.
double approx_conditional_mean(const QuantilePoly& p, double rho, double u_cond);

// Adds N(0, (0.05 * smallest support gap)^2) noise to a discrete column;
// continuous columns are returned unchanged. Throws DataError for a column
// with a single support value.
std::vector<double> jitter(std::span<const double> column, margins::VarType type,
                           std::uint64_t seed);

// Phi^-1(average rank / (n + 1)), standardized to mean 0 and unit variance.
// Empty for a constant column.
std::vector<double> normal_scores(std::span<const double> column);

struct GreedyOptions {
  int L = 3;
  double gamma = 1.0;
  int poly_degree = kDefaultPolyDegree;
  std::size_t discrete_limit = 10;  // residual distinct values for the discrete path
};

struct GreedyStep {
  std::size_t chosen = 0;
  double score = 0.0;
  std::vector<std::pair<std::size_t, double>> table;  // (column, score)
};

struct GreedyResult {
  std::vector<std::size_t> subset;
  double baseline = 0.0;  // Bernoulli log-likelihood of h_prev alone
  std::vector<GreedyStep> steps;
};

// scores[c] are normal scores of (jittered) covariate c; an empty vector
// marks a column that cannot be selected.
GreedyResult greedy_select(std::span<const double> residuals,
                           std::span<const double> y,
                           std::span<const double> h_prev,
                           const std::vector<std::vector<double>>& scores,
                           const GreedyOptions& options);

}  // namespace copulaboost::greedy
