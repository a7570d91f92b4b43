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

// Experiment drivers shared by the command-line tool and the acceptance
// suite: seeded holdout fits on the bundled real datasets, simulation grid
// replicates and prefix curves.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "copulaboost/boosting.hpp"
#include "copulaboost/dataset.hpp"
#include "copulaboost/metrics.hpp"
#include "copulaboost/simgen.hpp"

namespace copulaboost::bench {

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Permutation drawn from the "splits" stream of `seed`; its first n_train
// entries are the training rows.
Split random_split(std::size_t n, std::size_t n_train, std::uint64_t seed);

// Linear interpolation between order statistics, q in [0, 1].
double percentile(std::vector<double> values, double q);
double median(std::vector<double> values);

inline constexpr std::size_t kWdbcTrain = 427;
inline constexpr std::size_t kBostonTrain = 380;
inline constexpr double kBostonQuantile = 0.76;

// Breast cancer data with a 0/1 column named "malignant".
data::Dataset load_wdbc(const std::string& path);
// Housing data; the response "MEDV_high" marks MEDV above its 76th percentile
// over all rows, and MEDV itself is dropped.
data::Dataset load_boston(const std::string& path);

struct HoldoutResult {
  metrics::EvalReport train;
  metrics::EvalReport test;
  std::size_t M = 0;
  std::size_t M_star = 0;
};

// Fits on the training rows and picks M* on them by cfg.criterion.
HoldoutResult run_holdout(const data::Dataset& full, std::size_t n_train,
                          const boosting::BoostConfig& cfg, std::uint64_t split_seed);

struct GridResult {
  double test_loglik = 0.0;  // at M* chosen by validation likelihood
  double test_auc = 0.5;     // at M* chosen by validation AUC
  std::size_t M = 0;
  std::size_t M_star_loglik = 0;
  std::size_t M_star_auc = 0;
};

// sets = {train, validation, test}.
GridResult run_grid_replicate(std::span<const data::Dataset> sets,
                              const boosting::BoostConfig& cfg);

struct Curves {
  std::vector<double> train_loglik;
  std::vector<double> test_loglik;
  std::vector<double> train_auc;
  std::vector<double> test_auc;
};

Curves prefix_curves(const boosting::BoostModel& model, const data::Dataset& train,
                     const data::Dataset& test);

// Component budget per component size for the simulation grid.
int default_grid_budget(int L);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator; 0 for a single value
};

Summary summarize(std::span<const double> values);
// "mean (sd)" with the given number of decimals.
std::string mean_sd_cell(std::span<const double> values, int decimals);

}  // namespace copulaboost::bench
