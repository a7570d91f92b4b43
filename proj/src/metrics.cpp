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

#include "copulaboost/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "copulaboost/errors.hpp"

namespace copulaboost::metrics {

namespace {

void check_sizes(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
}

}  // namespace

double logistic(double h) {
  if (h >= 0.0) return 1.0 / (1.0 + std::exp(-h));
  const double e = std::exp(h);
  return e / (1.0 + e);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

double log_likelihood(std::span<const double> y, std::span<const double> p) {
  check_sizes(y, p);
  double ll = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double q = std::clamp(p[i], kProbFloor, 1.0 - kProbFloor);
    ll += y[i] > 0.5 ? std::log(q) : std::log1p(-q);
  }
  return ll;
}

double log_likelihood_scores(std::span<const double> y, std::span<const double> h) {
  check_sizes(y, h);
  double ll = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double q = std::clamp(logistic(h[i]), kProbFloor, 1.0 - kProbFloor);
    ll += y[i] > 0.5 ? std::log(q) : std::log1p(-q);
  }
  return ll;
}

double auc(std::span<const double> y, std::span<const double> scores) {
  check_sizes(y, scores);
  const std::size_t n = y.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of midranks of the positives.
  double rank_sum = 0.0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[idx[j]] == scores[idx[i]]) ++j;
    const double mid = 0.5 * double(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (y[idx[k]] > 0.5) {
        rank_sum += mid;
        ++pos;
      }
    }
    i = j;
  }
  const std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) throw DataError("AUC needs both classes");
  const double np = double(pos);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * double(neg));
}

double accuracy(std::span<const double> y, std::span<const double> p, double threshold) {
  check_sizes(y, p);
  if (y.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y.size(); ++i) hits += (p[i] > threshold) == (y[i] > 0.5);
  return double(hits) / double(y.size());
}

EvalReport evaluate(std::span<const double> y, std::span<const double> p) {
  EvalReport r;
  r.loglik = log_likelihood(y, p);
  r.auc = auc(y, p);
  r.accuracy = accuracy(y, p);
  r.n = y.size();
  return r;
}

}  // namespace copulaboost::metrics
