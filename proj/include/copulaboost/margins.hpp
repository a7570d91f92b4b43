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

// Univariate marginal models and probability integral transforms.

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "copulaboost/pit.hpp"

namespace copulaboost::margins {

enum class VarType { Continuous, Binary, Ordinal };
enum class MarginMode { Parametric, Rank };
enum class MarginKind { Gaussian, Bernoulli, Ordinal, Rank };

std::string_view var_type_name(VarType t);
VarType parse_var_type(std::string_view s);
std::string_view margin_mode_name(MarginMode m);
MarginMode parse_margin_mode(std::string_view s);
std::string_view margin_kind_name(MarginKind k);
MarginKind parse_margin_kind(std::string_view s);

class MarginalModel {
 public:
  MarginalModel() = default;  // standard normal

  static MarginalModel gaussian(double mu, double sigma);
  // Two-point distribution on {lo, hi} with P(hi) = p.
  static MarginalModel bernoulli(double p, double lo = 0.0, double hi = 1.0);
  static MarginalModel ordinal(std::vector<double> support,
                               std::vector<double> probs);
  static MarginalModel rank(std::vector<double> sample, bool continuous);

  MarginKind kind() const { return kind_; }
  bool is_discrete() const;

  // Clamped (F(x), F(x-)). Throws DataError for a discrete x off the support.
  PitPair pit(double x) const;
  // Unclamped F(x).
  double cdf(double x) const;
  // Smallest x with F(x) >= u.
  double quantile(double u) const;

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  double p() const { return p_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<double>& sample() const { return sample_; }
  bool rank_continuous() const { return rank_continuous_; }

  bool operator==(const MarginalModel&) const = default;

 private:
  std::size_t support_index(double x) const;

  MarginKind kind_ = MarginKind::Gaussian;
  double mu_ = 0.0;
  double sigma_ = 1.0;
  double p_ = 0.5;
  double lo_ = 0.0;
  double hi_ = 1.0;
  std::vector<double> support_;
  std::vector<double> probs_;
  std::vector<double> cum_;  // cum_[j] = F(support_[j])
  std::vector<double> sample_;  // sorted
  bool rank_continuous_ = true;
};

MarginalModel fit_margin(std::span<const double> column, VarType type,
                         MarginMode mode);

// ceil(u n)-th order statistic.
double empirical_quantile(std::span<const double> sample, double u);
double empirical_quantile_sorted(std::span<const double> sorted, double u);

// Distinct values of a column, ascending.
std::vector<double> distinct_values(std::span<const double> column);

}  // namespace copulaboost::margins
