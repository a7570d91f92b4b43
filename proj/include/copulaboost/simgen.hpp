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

// Synthetic data generators: Gaussian-copula covariates, linear interaction
// predictors, random regular vines and additive copula-effect models.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "copulaboost/copula.hpp"
#include "copulaboost/dataset.hpp"
#include "copulaboost/dvine.hpp"
#include "copulaboost/pit.hpp"

namespace copulaboost::simgen {

enum class Block { Gamma, Beta, Bernoulli, StudentT };

std::string_view block_name(Block b);

// One covariate margin: Gamma(shape 2, rate 2), Beta(3, 1), Bernoulli(param)
// or Student t with param degrees of freedom.
struct ColumnMargin {
  Block block = Block::Gamma;
  double param = 0.0;

  bool discrete() const { return block == Block::Bernoulli; }
  double quantile(double u) const;
  double cdf(double x) const;
  PitPair pit(double x) const;
  margins::VarType var_type() const;
};

// floor(discrete_fraction * p) Bernoulli columns; the rest split evenly into
// Gamma, Beta and t groups (earlier groups take the remainder). Columns are
// laid out Gamma, Beta, Bernoulli, t. Bernoulli probabilities and t degrees
// of freedom are equidistant on [0.2, 0.8] and [3, 8].
std::vector<ColumnMargin> default_margins(std::size_t p, double discrete_fraction = 0.25);

// Correlation matrix from canonical-vine partial correlations drawn iid
// Uniform(-half_width, half_width).
Eigen::MatrixXd random_correlation(std::size_t p, std::uint64_t seed,
                                   double half_width = 0.5);

struct CovariateSpec {
  std::vector<ColumnMargin> margins;
  Eigen::MatrixXd R;

  std::size_t p() const { return margins.size(); }
};

CovariateSpec make_covariate_spec(std::size_t p, double discrete_fraction,
                                  std::uint64_t seed);

struct Covariates {
  std::vector<std::vector<double>> x;  // x[c][i]
  std::vector<std::vector<double>> u;  // copula uniforms behind x
};

// Throws DataError when R is not positive definite.
Covariates gen_covariates(std::size_t n, const CovariateSpec& spec,
                          std::uint64_t seed);

// Bisection for mean(logistic(b0 + eta_i)) = target.
double calibrate_intercept(std::span<const double> eta, double target);

inline constexpr std::size_t kCalibrationSize = 100000;
// Setting-3 predictors cost about 12000 h-function calls per row.
inline constexpr std::size_t kEffectCalibrationSize = 20000;

struct Term {
  std::vector<std::size_t> columns;
  double beta = 0.0;
};

// counts[k] terms of order k + 1, columns distinct within a term, each
// coefficient +-Uniform(0.5, 1.5).
std::vector<Term> random_terms(std::size_t p, std::span<const std::size_t> counts,
                               std::uint64_t seed);

double linear_predictor(std::span<const Term> terms,
                        const std::vector<std::vector<double>>& x, std::size_t row);

// ---- regular vines ----------------------------------------------------

// Vine array: a[j][j] is the j-th variable in the ordering; for t < j the
// entry a[t][j] is paired with a[j][j] in tree t + 1 given a[0..t-1][j].
using VineArray = std::vector<std::vector<std::size_t>>;

struct VineEdge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  std::vector<std::size_t> given;  // ascending

  bool operator==(const VineEdge&) const = default;
  bool operator<(const VineEdge& o) const;
};

// Edges per tree, each tree sorted.
std::vector<std::vector<VineEdge>> vine_edges(const VineArray& a);

// Throws std::invalid_argument unless the array encodes a regular vine in
// which every column only refers to variables placed before it.
void validate_vine_array(const VineArray& a);

// Random tree sequence (uniform labeled first tree, uniform spanning trees of
// each proximity graph) converted to a vine array.
VineArray sample_rvine_structure(std::size_t dim, std::uint64_t seed);

struct RVine {
  VineArray array;
  std::vector<std::vector<copula::BivariateCopula>> pairs;  // pairs[t][j], t < j

  std::size_t dim() const { return array.size(); }
};

// Families drawn uniformly from `families`; tau in tree t (1-based) drawn
// Uniform(0, b1 / t).
RVine random_rvine(std::size_t dim, std::span<const copula::Family> families,
                   double b1, std::uint64_t seed);

// u[v][i] for variable v, strictly inside (0, 1).
std::vector<std::vector<double>> simulate_rvine(const RVine& vine, std::size_t n,
                                                std::uint64_t seed);

// ---- settings ------------------------------------------------------------

struct SimConfig {
  int setting = 3;
  std::size_t n = 500;
  std::size_t p = 100;
  double discrete_fraction = 0.25;
  double target = 1.0 / 3.0;  // P(Y = 1); p_y in setting 2
  std::size_t d = 20;              // setting 2
  std::size_t effects = 30;        // setting 3
  std::size_t effect_size = 4;     // setting 3
  std::size_t interaction = 3;     // setting 4 term order
  std::size_t terms4 = 30;         // setting 4 term count
  double tau_bound = 0.9;          // b_1 for random vines
  int bins = 100;                  // setting 3 effect evaluation
  std::size_t calibration = 0;     // 0: per-setting default

  std::uint64_t seed = 1;

  std::size_t calibration_size() const;
};

struct Simulation {
  data::Dataset data;
  std::string info;  // JSON description of the generating model
  double beta0 = 0.0;
};

// Draws `count` datasets of cfg.n rows from one generating model.
std::vector<Simulation> simulate(const SimConfig& cfg, std::size_t count = 1);

// Setting-3 effect: E(S | x) for S ~ Uniform(-1, 1) first in a D-vine,
// binned with K equal-probability bins and midpoint representatives.
double effect_expectation(const dvine::DVineModel& vine,
                          std::span<const PitPair> x_pits, int K);

}  // namespace copulaboost::simgen
