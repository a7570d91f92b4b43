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

#include "benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "copulaboost/errors.hpp"
#include "copulaboost/rng.hpp"

namespace copulaboost::bench {

namespace {

metrics::EvalReport score(const boosting::BoostModel& model, const data::Dataset& d,
                          std::size_t prefix) {
  std::vector<double> p = boosting::decision_function(model, d, prefix);
  for (double& v : p) v = metrics::logistic(v);
  return metrics::evaluate(d.y, p);
}

}  // namespace

Split random_split(std::size_t n, std::size_t n_train, std::uint64_t seed) {
  if (n_train > n) throw DataError("training size exceeds the number of rows");
  Rng rng(seed, "splits");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  Split s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  return s;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("percentile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return percentile(std::move(values), 0.5); }

data::Dataset load_wdbc(const std::string& path) {
  const data::RawTable table = data::read_csv(path);
  return data::build_dataset(table, data::infer_schema(table, "malignant"));
}

data::Dataset load_boston(const std::string& path) {
  data::RawTable table = data::read_csv(path);
  const auto it = std::find(table.header.begin(), table.header.end(), "MEDV");
  if (it == table.header.end()) throw DataError("'" + path + "' has no MEDV column");
  const auto j = static_cast<std::size_t>(it - table.header.begin());
  std::vector<double> medv;
  for (const auto& row : table.rows) {
    try {
      medv.push_back(std::stod(row[j]));
    } catch (const std::exception&) {
      throw DataError("MEDV value '" + row[j] + "' is not numeric");
    }
  }
  const double cut = percentile(medv, kBostonQuantile);
  table.header[j] = "MEDV_high";
  for (std::size_t i = 0; i < table.rows.size(); ++i) table.rows[i][j] = medv[i] > cut ? "1" : "0";
  return data::build_dataset(table, data::infer_schema(table, "MEDV_high"));
}

HoldoutResult run_holdout(const data::Dataset& full, std::size_t n_train,
                          const boosting::BoostConfig& cfg, std::uint64_t split_seed) {
  const Split s = random_split(full.rows(), n_train, split_seed);
  const data::Dataset train = full.select_rows(s.train);
  const data::Dataset test = full.select_rows(s.test);
  boosting::BoostModel model = boosting::fit(train, cfg);
  boosting::select_M_star(model, train, cfg.criterion);
  return {score(model, train, model.M_star), score(model, test, model.M_star), model.M(),
          model.M_star};
}

GridResult run_grid_replicate(std::span<const data::Dataset> sets,
                              const boosting::BoostConfig& cfg) {
  if (sets.size() != 3) throw std::invalid_argument("expected train, validation and test sets");
  boosting::BoostModel model = boosting::fit(sets[0], cfg);
  GridResult r;
  r.M = model.M();
  r.M_star_loglik = boosting::select_M_star(model, sets[1], boosting::Criterion::Likelihood);
  r.test_loglik = score(model, sets[2], r.M_star_loglik).loglik;
  r.M_star_auc = boosting::select_M_star(model, sets[1], boosting::Criterion::Auc);
  r.test_auc = score(model, sets[2], r.M_star_auc).auc;
  return r;
}

Curves prefix_curves(const boosting::BoostModel& model, const data::Dataset& train,
                     const data::Dataset& test) {
  using boosting::Criterion;
  return {boosting::prefix_curve(model, train, Criterion::Likelihood),
          boosting::prefix_curve(model, test, Criterion::Likelihood),
          boosting::prefix_curve(model, train, Criterion::Auc),
          boosting::prefix_curve(model, test, Criterion::Auc)};
}

int default_grid_budget(int L) {
  static constexpr int kBudget[] = {1000, 600, 500, 400, 300, 200};
  if (L < 1 || L > 6) throw std::invalid_argument("component size must lie in 1..6");
  return kBudget[L - 1];
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

std::string mean_sd_cell(std::span<const double> values, int decimals) {
  const Summary s = summarize(values);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*f (%.*f)", decimals, s.mean, decimals, s.sd);
  return buf;
}

}  // namespace copulaboost::bench
