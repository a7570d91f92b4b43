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

// The stagewise estimator: intercept, pseudo-residual loop, component-count
// selection on held-out data, prediction and model files.

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "copulaboost/component.hpp"
#include "copulaboost/copula.hpp"
#include "copulaboost/dataset.hpp"
#include "copulaboost/margins.hpp"

namespace copulaboost::boosting {

enum class Criterion { Likelihood, Auc };

std::string_view criterion_name(Criterion c);
Criterion parse_criterion(std::string_view s);

struct BoostConfig {
  int L = 3;
  double gamma = 1.0 / 3.0;
  int M_max = 50;
  int poly_degree = 4;
  int bins = component::kDefaultBins;
  std::vector<copula::Family> families = copula::default_candidates();
  margins::MarginMode margin_mode = margins::MarginMode::Parametric;
  Criterion criterion = Criterion::Likelihood;
  std::uint64_t seed = 1;
  int patience = 3;  // consecutive rejected stages before fit stops

  // Throws std::invalid_argument for out-of-range settings.
  void validate() const;

  bool operator==(const BoostConfig&) const = default;
};

struct BoostModel {
  std::vector<std::string> names;
  std::vector<margins::VarType> types;
  std::string response;
  double h0 = 0.0;
  std::vector<component::Component> components;
  std::size_t M_star = 0;
  BoostConfig config;
  std::vector<double> train_loglik;  // index k: after k components
  std::string stop_reason;
  std::map<std::string, std::string> metadata;

  std::size_t M() const { return components.size(); }

  bool operator==(const BoostModel&) const = default;
};

// log(ybar / (1 - ybar)); DataError for a single-class response.
double init_intercept(std::span<const double> y);

std::vector<double> pseudo_residuals(std::span<const double> y,
                                     std::span<const double> h);

BoostModel fit(const data::Dataset& train, const BoostConfig& config,
               std::vector<std::string>* warnings = nullptr);

// Throws DataError unless the dataset has the model's covariates in order.
void check_schema(const BoostModel& model, const data::Dataset& d);

// contributions[m][i] = evaluate(component m, row i).
std::vector<std::vector<double>> contributions(const BoostModel& model,
                                               const data::Dataset& d);

// Criterion on every prefix 0..M.
std::vector<double> prefix_curve(const BoostModel& model, const data::Dataset& d,
                                 Criterion criterion);

// First prefix length attaining the maximum criterion; stored in model.
std::size_t select_M_star(BoostModel& model, const data::Dataset& validation,
                          Criterion criterion);

// Log-odds using the first `prefix` components.
std::vector<double> decision_function(const BoostModel& model,
                                      const data::Dataset& d,
                                      std::size_t prefix);

// Probabilities using the first M* components.
std::vector<double> predict(const BoostModel& model, const data::Dataset& d);

inline constexpr std::string_view kModelFormat = "copulaboost-model/1";

std::string save_model(const BoostModel& model);
BoostModel load_model(std::string_view text);

}  // namespace copulaboost::boosting
