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

#include "copulaboost/margins.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "copulaboost/errors.hpp"
#include "copulaboost/special.hpp"

namespace copulaboost::margins {

std::string_view var_type_name(VarType t) {
  switch (t) {
    case VarType::Continuous: return "continuous";
    case VarType::Binary: return "binary";
    case VarType::Ordinal: return "ordinal";
  }
  return "?";
}

VarType parse_var_type(std::string_view s) {
  if (s == "continuous") return VarType::Continuous;
  if (s == "binary") return VarType::Binary;
  if (s == "ordinal") return VarType::Ordinal;
  throw std::invalid_argument("unknown variable type: " + std::string(s));
}

std::string_view margin_mode_name(MarginMode m) {
  return m == MarginMode::Parametric ? "parametric" : "rank";
}

MarginMode parse_margin_mode(std::string_view s) {
  if (s == "parametric") return MarginMode::Parametric;
  if (s == "rank") return MarginMode::Rank;
  throw std::invalid_argument("unknown margin mode: " + std::string(s));
}

std::string_view margin_kind_name(MarginKind k) {
  switch (k) {
    case MarginKind::Gaussian: return "gaussian";
    case MarginKind::Bernoulli: return "bernoulli";
    case MarginKind::Ordinal: return "ordinal";
    case MarginKind::Rank: return "rank";
  }
  return "?";
}

MarginKind parse_margin_kind(std::string_view s) {
  if (s == "gaussian") return MarginKind::Gaussian;
  if (s == "bernoulli") return MarginKind::Bernoulli;
  if (s == "ordinal") return MarginKind::Ordinal;
  if (s == "rank") return MarginKind::Rank;
  throw std::invalid_argument("unknown margin kind: " + std::string(s));
}

MarginalModel MarginalModel::gaussian(double mu, double sigma) {
  if (!std::isfinite(mu) || !(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("gaussian margin needs finite mu and sigma > 0");
  }
  MarginalModel m;
  m.kind_ = MarginKind::Gaussian;
  m.mu_ = mu;
  m.sigma_ = sigma;
  return m;
}

MarginalModel MarginalModel::bernoulli(double p, double lo, double hi) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli p outside [0, 1]");
  if (!(lo < hi)) throw std::invalid_argument("bernoulli support must satisfy lo < hi");
  MarginalModel m;
  m.kind_ = MarginKind::Bernoulli;
  m.p_ = p;
  m.lo_ = lo;
  m.hi_ = hi;
  return m;
}

MarginalModel MarginalModel::ordinal(std::vector<double> support,
                                     std::vector<double> probs) {
  if (support.empty() || support.size() != probs.size()) {
    throw std::invalid_argument("ordinal margin needs matching support and probs");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    if (j > 0 && !(support[j] > support[j - 1])) {
      throw std::invalid_argument("ordinal support must be strictly increasing");
    }
    if (!(probs[j] >= 0.0)) throw std::invalid_argument("negative ordinal probability");
    total += probs[j];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("ordinal probabilities must sum to 1");
  }
  MarginalModel m;
  m.kind_ = MarginKind::Ordinal;
  m.support_ = std::move(support);
  m.probs_ = std::move(probs);
  m.cum_.resize(m.probs_.size());
  std::partial_sum(m.probs_.begin(), m.probs_.end(), m.cum_.begin());
  m.cum_.back() = 1.0;
  return m;
}

MarginalModel MarginalModel::rank(std::vector<double> sample, bool continuous) {
  if (sample.empty()) throw DataError("rank margin of an empty column");
  std::sort(sample.begin(), sample.end());
  MarginalModel m;
  m.kind_ = MarginKind::Rank;
  m.sample_ = std::move(sample);
  m.rank_continuous_ = continuous;
  if (!continuous) m.support_ = distinct_values(m.sample_);
  return m;
}

bool MarginalModel::is_discrete() const {
  switch (kind_) {
    case MarginKind::Gaussian: return false;
    case MarginKind::Bernoulli:
    case MarginKind::Ordinal: return true;
    case MarginKind::Rank: return !rank_continuous_;
  }
  return false;
}

std::size_t MarginalModel::support_index(double x) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), x);
  const double tol = 1e-12 * std::max(1.0, std::abs(x));
  if (it != support_.end() && std::abs(*it - x) <= tol) {
    return static_cast<std::size_t>(it - support_.begin());
  }
  if (it != support_.begin() && std::abs(*(it - 1) - x) <= tol) {
    return static_cast<std::size_t>(it - support_.begin() - 1);
  }
  throw DataError("value " + std::to_string(x) + " is not in the discrete support");
}

double MarginalModel::cdf(double x) const {
  switch (kind_) {
    case MarginKind::Gaussian:
      return special::norm_cdf((x - mu_) / sigma_);
    case MarginKind::Bernoulli:
      return x < lo_ ? 0.0 : (x < hi_ ? 1.0 - p_ : 1.0);
    case MarginKind::Ordinal: {
      auto it = std::upper_bound(support_.begin(), support_.end(), x);
      return it == support_.begin() ? 0.0 : cum_[it - support_.begin() - 1];
    }
    case MarginKind::Rank: {
      const auto le = std::upper_bound(sample_.begin(), sample_.end(), x) - sample_.begin();
      const double n = static_cast<double>(sample_.size());
      return static_cast<double>(le) / (rank_continuous_ ? n + 1.0 : n);
    }
  }
  return 0.0;
}

PitPair MarginalModel::pit(double x) const {
  switch (kind_) {
    case MarginKind::Gaussian:
      return PitPair::continuous(clamp_unit(cdf(x)));
    case MarginKind::Bernoulli:
      if (x == lo_) return PitPair::discrete(clamp_unit(1.0 - p_), kUnitEps);
      if (x == hi_) return PitPair::discrete(clamp_unit(1.0), clamp_unit(1.0 - p_));
      throw DataError("value " + std::to_string(x) + " is not in the binary support");
    case MarginKind::Ordinal: {
      const std::size_t j = support_index(x);
      const double below = j == 0 ? 0.0 : cum_[j - 1];
      return PitPair::discrete(clamp_unit(cum_[j]), clamp_unit(below));
    }
    case MarginKind::Rank: {
      if (rank_continuous_) return PitPair::continuous(clamp_unit(cdf(x)));
      const double v = support_[support_index(x)];
      const double n = static_cast<double>(sample_.size());
      const auto lt = std::lower_bound(sample_.begin(), sample_.end(), v) - sample_.begin();
      const auto le = std::upper_bound(sample_.begin(), sample_.end(), v) - sample_.begin();
      return PitPair::discrete(clamp_unit(le / n), clamp_unit(lt / n));
    }
  }
  return {};
}

double MarginalModel::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile level outside [0, 1]");
  switch (kind_) {
    case MarginKind::Gaussian:
      return mu_ + sigma_ * special::norm_quantile(u);
    case MarginKind::Bernoulli:
      return u <= 1.0 - p_ ? lo_ : hi_;
    case MarginKind::Ordinal: {
      auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
      if (it == cum_.end()) --it;
      return support_[it - cum_.begin()];
    }
    case MarginKind::Rank: {
      const double n = static_cast<double>(sample_.size());
      const double scale = rank_continuous_ ? n + 1.0 : n;
      const auto k = static_cast<std::size_t>(std::ceil(u * scale - 1e-12));
      return sample_[std::clamp<std::size_t>(k, 1, sample_.size()) - 1];
    }
  }
  return 0.0;
}

std::vector<double> distinct_values(std::span<const double> column) {
  std::vector<double> v(column.begin(), column.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

MarginalModel fit_margin(std::span<const double> column, VarType type,
                         MarginMode mode) {
  if (column.empty()) throw DataError("cannot fit a margin to an empty column");
  if (column.size() < 2) throw DataError("margin fitting needs at least 2 values");
  for (double x : column) {
    if (!std::isfinite(x)) throw DataError("non-finite value in column");
  }
  const std::vector<double> levels = distinct_values(column);
  if (type == VarType::Binary && levels.size() != 2) {
    throw DataError("binary column must contain exactly two distinct values");
  }
  if (type == VarType::Continuous && levels.size() < 2) {
    throw DataError("zero-variance continuous column");
  }
  const double n = static_cast<double>(column.size());

  if (mode == MarginMode::Rank) {
    return MarginalModel::rank({column.begin(), column.end()},
                               type == VarType::Continuous);
  }
  switch (type) {
    case VarType::Continuous: {
      const double mean = std::accumulate(column.begin(), column.end(), 0.0) / n;
      double ss = 0.0;
      for (double x : column) ss += (x - mean) * (x - mean);
      const double sd = std::sqrt(ss / n);
      if (!(sd > 0.0)) throw DataError("zero-variance continuous column");
      return MarginalModel::gaussian(mean, sd);
    }
    case VarType::Binary: {
      const auto hits = std::count(column.begin(), column.end(), levels[1]);
      return MarginalModel::bernoulli(static_cast<double>(hits) / n, levels[0], levels[1]);
    }
    case VarType::Ordinal: {
      std::vector<double> probs(levels.size(), 0.0);
      for (double x : column) {
        probs[std::lower_bound(levels.begin(), levels.end(), x) - levels.begin()] += 1.0;
      }
      for (double& p : probs) p /= n;
      // Absorb rounding so the probabilities sum to exactly one.
      const double rest = std::accumulate(probs.begin(), probs.end() - 1, 0.0);
      probs.back() = 1.0 - rest;
      return MarginalModel::ordinal(levels, probs);
    }
  }
  throw std::logic_error("unreachable");
}

double empirical_quantile_sorted(std::span<const double> sorted, double u) {
  if (sorted.empty()) throw std::invalid_argument("empirical quantile of an empty sample");
  if (!(u > 0.0) || u > 1.0) throw std::domain_error("empirical quantile level must lie in (0, 1]");
  const double n = static_cast<double>(sorted.size());
  // The slack keeps u = l/K from rounding up past an exact integer u*n.
  auto k = static_cast<std::size_t>(std::ceil(u * n - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

double empirical_quantile(std::span<const double> sample, double u) {
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  return empirical_quantile_sorted(s, u);
}

}  // namespace copulaboost::margins
