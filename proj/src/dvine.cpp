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

#include "copulaboost/dvine.hpp"

#include <stdexcept>

namespace copulaboost::dvine {

using copula::BivariateCopula;
using copula::PseudoObs;

std::vector<std::vector<BivariateCopula>> fit_pairs(
    const std::vector<std::vector<PitPair>>& pits,
    std::span<const copula::Family> candidates,
    std::vector<std::string>* warnings) {
  const std::size_t d = pits.size();
  if (d < 2) throw std::invalid_argument("a D-vine needs at least 2 variables");
  const std::size_t n = pits[0].size();
  for (const auto& col : pits) {
    if (col.size() != n) throw std::invalid_argument("ragged PIT matrix");
  }
  if (n < copula::kMinPairObservations) {
    throw std::invalid_argument("too few observations to fit a D-vine");
  }

  // first[e][i] = F(v_e | v_{e+1..e+t}), second[e][i] = F(v_{e+t+1} | same).
  std::vector<std::vector<PitPair>> first(pits.begin(), pits.end() - 1);
  std::vector<std::vector<PitPair>> second(pits.begin() + 1, pits.end());

  std::vector<std::vector<BivariateCopula>> pairs(d - 1);
  std::vector<PseudoObs> obs(n);
  for (std::size_t t = 0; t + 1 < d; ++t) {
    const std::size_t edges = d - 1 - t;
    pairs[t].resize(edges);
    for (std::size_t e = 0; e < edges; ++e) {
      for (std::size_t i = 0; i < n; ++i) obs[i] = PseudoObs::from(first[e][i], second[e][i]);
      const copula::PairFit fit = copula::select_family(obs, candidates);
      pairs[t][e] = fit.copula;
      if (warnings && !fit.note.empty()) {
        warnings->push_back("tree " + std::to_string(t + 1) + " edge " +
                            std::to_string(e + 1) + ": " + fit.note);
      }
    }
    if (edges == 1) break;
    std::vector<std::vector<PitPair>> next_first(edges - 1), next_second(edges - 1);
    for (std::size_t e = 0; e + 1 < edges; ++e) {
      next_first[e].resize(n);
      next_second[e].resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        next_first[e][i] = copula::condition_first(pairs[t][e], first[e][i], second[e][i]);
        next_second[e][i] =
            copula::condition_second(pairs[t][e + 1], first[e + 1][i], second[e + 1][i]);
      }
    }
    first = std::move(next_first);
    second = std::move(next_second);
  }
  return pairs;
}

DVineModel fit_dvine(const std::vector<std::vector<double>>& columns,
                     std::vector<margins::MarginalModel> margins,
                     std::span<const copula::Family> candidates,
                     std::vector<std::string>* warnings) {
  if (columns.size() != margins.size()) {
    throw std::invalid_argument("one margin per column required");
  }
  std::vector<std::vector<PitPair>> pits(columns.size());
  for (std::size_t v = 0; v < columns.size(); ++v) {
    pits[v].reserve(columns[v].size());
    for (double x : columns[v]) pits[v].push_back(margins[v].pit(x));
  }
  DVineModel m;
  m.pairs = fit_pairs(pits, candidates, warnings);
  m.margins = std::move(margins);
  return m;
}

std::vector<PitPair> covariate_chain(const DVineModel& m,
                                     std::span<const PitPair> x_pits) {
  const std::size_t L = m.covariate_count();
  if (x_pits.size() != L) throw std::invalid_argument("covariate count mismatch");
  std::vector<PitPair> chain(L);
  if (L == 0) return chain;
  // Recursion over the covariate sub-vine (edges e >= 1); first/second are
  // indexed by e - 1.
  std::vector<PitPair> first(x_pits.begin(), x_pits.end() - 1);
  std::vector<PitPair> second(x_pits.begin() + 1, x_pits.end());
  chain[0] = x_pits[0];
  for (std::size_t t = 0; t + 1 < L; ++t) {
    const std::size_t edges = L - 1 - t;  // covariate edges in tree t
    chain[t + 1] = copula::condition_second(m.pairs[t][1], first[0], second[0]);
    for (std::size_t e = 0; e + 1 < edges; ++e) {
      first[e] = copula::condition_first(m.pairs[t][e + 1], first[e], second[e]);
      second[e] = copula::condition_second(m.pairs[t][e + 2], first[e + 1], second[e + 1]);
    }
    first.resize(edges - 1);
    second.resize(edges - 1);
  }
  return chain;
}

PitPair condition_response(const DVineModel& m, const PitPair& y_pit,
                           std::span<const PitPair> chain) {
  PitPair y = y_pit;
  for (std::size_t t = 0; t < chain.size(); ++t) {
    y = copula::condition_first(m.pairs[t][0], y, chain[t]);
  }
  return y;
}

ResponseMap::ResponseMap(const DVineModel& m, std::span<const PitPair> chain) {
  if (chain.size() > m.pairs.size()) throw std::invalid_argument("chain longer than the vine");
  steps_.reserve(chain.size());
  for (std::size_t t = 0; t < chain.size(); ++t) steps_.emplace_back(m.pairs[t][0], chain[t]);
}

PitPair ResponseMap::operator()(const PitPair& y_pit) const {
  PitPair y = y_pit;
  for (const auto& step : steps_) y = step(y);
  return y;
}

double conditional_cdf(const DVineModel& m, const PitPair& y_pit,
                       std::span<const PitPair> x_pits) {
  return condition_response(m, y_pit, covariate_chain(m, x_pits)).u;
}

}  // namespace copulaboost::dvine
