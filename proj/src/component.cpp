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

#include "copulaboost/component.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "copulaboost/errors.hpp"

namespace copulaboost::component {

std::string_view residual_margin_name(ResidualMargin m) {
  return m == ResidualMargin::Empirical ? "empirical" : "gaussian";
}

ResidualMargin parse_residual_margin(std::string_view s) {
  if (s == "empirical") return ResidualMargin::Empirical;
  if (s == "gaussian") return ResidualMargin::Gaussian;
  throw std::invalid_argument("unknown residual margin: " + std::string(s));
}

BinGrid build_bin_grid(std::span<const double> residuals, int K,
                       RepresentativeRule rule) {
  if (K < 2) throw std::invalid_argument("bin count must be at least 2");
  if (residuals.empty()) throw std::invalid_argument("no residuals to bin");
  std::vector<double> sorted(residuals.begin(), residuals.end());
  std::sort(sorted.begin(), sorted.end());

  BinGrid g;
  g.edges.push_back(-1.0);
  for (int k = 1; k <= K; ++k) {
    const double upper = k == K ? 1.0 : margins::empirical_quantile_sorted(sorted, double(k) / K);
    const double level = rule == RepresentativeRule::BinMedian
                             ? (2.0 * k - 1.0) / (2.0 * K)
                             : std::min(1.0, double(k) / K + 0.5 / K);
    const double rep = std::clamp(margins::empirical_quantile_sorted(sorted, level), -1.0, 1.0);
    if (upper <= g.edges.back()) continue;  // zero-width bin
    g.edges.push_back(std::clamp(upper, -1.0, 1.0));
    g.reps.push_back(std::clamp(rep, g.edges[g.edges.size() - 2], g.edges.back()));
  }
  return g;
}

Component fit_component(std::span<const double> residuals,
                        const std::vector<std::vector<double>>& x_columns,
                        std::vector<margins::MarginalModel> x_margins,
                        std::vector<std::size_t> subset,
                        const ComponentOptions& options,
                        std::vector<std::string>* warnings) {
  if (x_columns.size() != subset.size() || x_margins.size() != subset.size()) {
    throw std::invalid_argument("subset, columns and margins must align");
  }
  if (!(options.gamma > 0.0 && options.gamma <= 1.0)) {
    throw std::invalid_argument("learning rate must lie in (0, 1]");
  }
  Component c;
  c.subset = std::move(subset);
  c.gamma = options.gamma;
  const std::vector<double> levels = margins::distinct_values(residuals);
  margins::MarginalModel y_margin;
  if (levels.size() <= kDiscreteResidualLimit) {
    c.mode = Mode::Discrete;
    c.atoms = levels;
    y_margin = margins::fit_margin(residuals, margins::VarType::Ordinal, options.margin_mode);
  } else {
    c.mode = Mode::Binned;
    BinGrid g = build_bin_grid(residuals, options.bins, options.rule);
    c.edges = std::move(g.edges);
    c.reps = std::move(g.reps);
    y_margin = options.residual_margin == ResidualMargin::Empirical
                   ? margins::fit_margin(residuals, margins::VarType::Continuous, margins::MarginMode::Rank)
                   : margins::fit_margin(residuals, margins::VarType::Continuous,
                                         margins::MarginMode::Parametric);
  }

  std::vector<std::vector<double>> columns;
  columns.reserve(x_columns.size() + 1);
  columns.emplace_back(residuals.begin(), residuals.end());
  columns.insert(columns.end(), x_columns.begin(), x_columns.end());
  x_margins.insert(x_margins.begin(), std::move(y_margin));
  c.vine = dvine::fit_dvine(columns, std::move(x_margins), options.families, warnings);
  return c;
}

std::vector<PitPair> covariate_pits(const Component& c,
                                    std::span<const double> x_subset) {
  if (x_subset.size() != c.size()) throw std::invalid_argument("covariate count mismatch");
  std::vector<PitPair> out(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (!std::isfinite(x_subset[j])) {
      throw DataError("missing value for covariate column " + std::to_string(c.subset[j]));
    }
    out[j] = c.vine.margins[j + 1].pit(x_subset[j]);
  }
  return out;
}

double expected_value_discrete(const Component& c,
                               std::span<const PitPair> x_pits) {
  if (c.mode != Mode::Discrete) throw std::logic_error("component is not in discrete mode");
  const dvine::ResponseMap response(c.vine, dvine::covariate_chain(c.vine, x_pits));
  double e = 0.0;
  for (double a : c.atoms) {
    const PitPair f = response(c.y_margin().pit(a));
    e += a * (f.u - f.u_minus);
  }
  return e;
}

std::vector<double> bin_weights(const Component& c,
                                std::span<const PitPair> x_pits) {
  const auto chain = dvine::covariate_chain(c.vine, x_pits);
  const dvine::ResponseMap response(c.vine, chain);
  std::vector<double> w(c.reps.size());
  double prev = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double cur =
        k + 1 == w.size()
            ? 1.0
            : response(c.y_margin().pit(c.edges[k + 1])).u;
    w[k] = cur - prev;
    prev = cur;
  }
  return w;
}

double expected_value_binned(const Component& c,
                             std::span<const PitPair> x_pits) {
  if (c.mode != Mode::Binned) throw std::logic_error("component is not in binned mode");
  const auto w = bin_weights(c, x_pits);
  double e = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) e += c.reps[k] * w[k];
  return e;
}

double expected_value(const Component& c, std::span<const PitPair> x_pits) {
  return c.mode == Mode::Discrete ? expected_value_discrete(c, x_pits)
                                  : expected_value_binned(c, x_pits);
}

double clamp_and_scale(double expectation, double gamma) {
  return gamma * std::clamp(expectation, -1.0, 1.0);
}

double evaluate(const Component& c, std::span<const double> x_subset) {
  return clamp_and_scale(expected_value(c, covariate_pits(c, x_subset)), c.gamma);
}

std::vector<double> evaluate_rows(const Component& c,
                                  const std::vector<std::vector<double>>& columns) {
  for (std::size_t id : c.subset) {
    if (id >= columns.size()) throw DataError("component references a missing column");
  }
  const std::size_t n = c.subset.empty() ? 0 : columns[c.subset[0]].size();
  std::vector<double> out(n);
  std::vector<double> x(c.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) x[j] = columns[c.subset[j]][i];
    out[i] = evaluate(c, x);
  }
  return out;
}

}  // namespace copulaboost::component
