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

#include "copulaboost/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "copulaboost/errors.hpp"
#include "copulaboost/metrics.hpp"
#include "copulaboost/rng.hpp"
#include "copulaboost/special.hpp"

namespace copulaboost::greedy {

namespace {

constexpr double kMinVariance = 1e-6;

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && x[idx[j]] == x[idx[i]]) ++j;
    const double mid = 0.5 * double(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) r[idx[k]] = mid;
    i = j;
  }
  return r;
}

void standardize(std::vector<double>& v) {
  const double n = double(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double& x : v) {
    x -= mean;
    ss += x * x;
  }
  const double sd = std::sqrt(ss / n);
  if (sd > 0.0) {
    for (double& x : v) x /= sd;
  }
}

double mean_product(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s / double(a.size());
}

}  // namespace

double QuantilePoly::operator()(double z) const {
  double r = 0.0;
  for (std::size_t j = coeffs.size(); j-- > 0;) r = r * z + coeffs[j];
  return r;
}

QuantilePoly fit_quantile_poly(std::span<const double> residuals, int degree) {
  if (degree < 1 || degree > 8) throw std::invalid_argument("polynomial degree must lie in [1, 8]");
  const std::size_t n = residuals.size();
  if (n <= std::size_t(degree) + 1) throw std::invalid_argument("too few residuals for the polynomial");
  std::vector<double> sorted(residuals.begin(), residuals.end());
  std::sort(sorted.begin(), sorted.end());
  Eigen::MatrixXd x(n, degree + 1);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double le = double(std::upper_bound(sorted.begin(), sorted.end(), residuals[i]) - sorted.begin());
    const double z = special::norm_quantile(le / double(n + 1));
    double pw = 1.0;
    for (int j = 0; j <= degree; ++j) {
      x(i, j) = pw;
      pw *= z;
    }
    y(i) = residuals[i];
  }
  const auto qr = x.colPivHouseholderQr();
  if (qr.rank() < degree + 1) throw NumericError("quantile polynomial design is rank deficient");
  const Eigen::VectorXd beta = qr.solve(y);
  QuantilePoly p;
  p.coeffs.assign(beta.data(), beta.data() + beta.size());
  return p;
}

std::vector<double> normal_moments(double mu, double sigma, int m) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
  std::vector<double> e(m + 1);
  e[0] = 1.0;
  if (m >= 1) e[1] = mu;
  const double s2 = sigma * sigma;
  for (int j = 2; j <= m; ++j) e[j] = mu * e[j - 1] + (j - 1) * s2 * e[j - 2];
  return e;
}

double poly_mean(const QuantilePoly& p, double mu, double sigma) {
  const auto e = normal_moments(mu, sigma, p.degree());
  double r = 0.0;
  for (std::size_t j = 0; j < p.coeffs.size(); ++j) r += p.coeffs[j] * e[j];
  return r;
}

double approx_conditional_mean(const QuantilePoly& p, double rho, double u_cond) {
  if (!(rho > -1.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (-1, 1)");
  return poly_mean(p, rho * special::norm_quantile(u_cond), std::sqrt(1.0 - rho * rho));
}

std::vector<double> jitter(std::span<const double> column, margins::VarType type,
                           std::uint64_t seed) {
  std::vector<double> out(column.begin(), column.end());
  if (type == margins::VarType::Continuous) return out;
  const std::vector<double> levels = margins::distinct_values(column);
  if (levels.size() < 2) throw DataError("cannot jitter a column with a single value");
  double gap = levels[1] - levels[0];
  for (std::size_t j = 2; j < levels.size(); ++j) gap = std::min(gap, levels[j] - levels[j - 1]);
  Rng rng(seed, "jitter");
  const double sd = 0.05 * gap;
  for (double& x : out) x += sd * rng.normal();
  return out;
}

std::vector<double> normal_scores(std::span<const double> column) {
  const std::size_t n = column.size();
  if (n == 0 || margins::distinct_values(column).size() < 2) return {};
  const std::vector<double> r = average_ranks(column);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = special::norm_quantile(r[i] / double(n + 1));
  standardize(z);
  return z;
}

GreedyResult greedy_select(std::span<const double> residuals,
                           std::span<const double> y,
                           std::span<const double> h_prev,
                           const std::vector<std::vector<double>>& scores,
                           const GreedyOptions& options) {
  const std::size_t n = residuals.size();
  if (y.size() != n || h_prev.size() != n) throw std::invalid_argument("length mismatch");
  if (options.L < 1) throw std::invalid_argument("L must be at least 1");
  for (const auto& s : scores) {
    if (!s.empty() && s.size() != n) throw std::invalid_argument("score column length mismatch");
  }

  GreedyResult result;
  result.baseline = metrics::log_likelihood_scores(y, h_prev);

  // Response model: a latent normal Z_y with conditional law N(mu_i, sigma2)
  // given the chosen covariates, mapped to E(Y | x) either through the
  // quantile polynomial or through the atoms of a discrete residual.
  const std::vector<double> atoms = margins::distinct_values(residuals);
  const bool discrete = atoms.size() <= options.discrete_limit;
  if (atoms.size() < 2) return result;

  QuantilePoly poly;
  std::vector<double> response;    // standardized normal scores (continuous)
  std::vector<double> thresholds;  // Phi^-1(F(a_k)), k < last (discrete)
  std::vector<double> centered;    // residual - mean (discrete)
  double stein = 0.0;              // E[g(Z) Z] for the step function g
  if (discrete) {
    const double mean = std::accumulate(residuals.begin(), residuals.end(), 0.0) / double(n);
    centered.resize(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = residuals[i] - mean;
    double cum = 0.0;
    for (std::size_t k = 0; k + 1 < atoms.size(); ++k) {
      cum += double(std::count(residuals.begin(), residuals.end(), atoms[k])) / double(n);
      const double t = special::norm_quantile(cum);
      thresholds.push_back(t);
      stein += special::norm_pdf(t) * (atoms[k + 1] - atoms[k]);
    }
  } else {
    poly = fit_quantile_poly(residuals, options.poly_degree);
    response = normal_scores(residuals);
  }

  auto expectation = [&](double mu, double sigma) {
    if (!discrete) return poly_mean(poly, mu, sigma);
    double e = 0.0, below = 0.0;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const double f = k + 1 < atoms.size() ? special::norm_cdf((thresholds[k] - mu) / sigma) : 1.0;
      e += atoms[k] * (f - below);
      below = f;
    }
    return e;
  };

  std::vector<std::vector<double>> cond(scores.begin(), scores.end());
  std::vector<bool> available(cond.size());
  for (std::size_t c = 0; c < cond.size(); ++c) available[c] = !cond[c].empty();
  std::vector<double> mu(n, 0.0), h(n);
  double sigma2 = 1.0;
  double current = result.baseline;

  for (int step = 0; step < options.L; ++step) {
    GreedyStep record;
    double best_score = -std::numeric_limits<double>::infinity();
    std::size_t best = cond.size();
    double best_a = 0.0;
    for (std::size_t c = 0; c < cond.size(); ++c) {
      if (!available[c]) continue;
      const double a = discrete ? mean_product(centered, cond[c]) / stein
                                : mean_product(response, cond[c]);
      const double s2 = std::max(sigma2 - a * a, kMinVariance);
      const double sd = std::sqrt(s2);
      for (std::size_t i = 0; i < n; ++i) {
        const double e = expectation(mu[i] + a * cond[c][i], sd);
        h[i] = h_prev[i] + options.gamma * std::clamp(e, -1.0, 1.0);
      }
      const double score = metrics::log_likelihood_scores(y, h);
      record.table.emplace_back(c, score);
      if (score > best_score) {  // strict: ties keep the lowest index
        best_score = score;
        best = c;
        best_a = a;
      }
    }
    if (best == cond.size() || !(best_score > current)) break;

    record.chosen = best;
    record.score = best_score;
    result.steps.push_back(std::move(record));
    result.subset.push_back(best);
    current = best_score;
    available[best] = false;

    const std::vector<double> e = cond[best];
    for (std::size_t i = 0; i < n; ++i) mu[i] += best_a * e[i];
    sigma2 = std::max(sigma2 - best_a * best_a, kMinVariance);
    // Gaussian h-function on the normal scale: condition every remaining
    // candidate on the chosen one.
    for (std::size_t c = 0; c < cond.size(); ++c) {
      if (!available[c]) continue;
      const double r = std::clamp(mean_product(cond[c], e), -0.999999, 0.999999);
      const double s = std::sqrt(1.0 - r * r);
      for (std::size_t i = 0; i < n; ++i) cond[c][i] = (cond[c][i] - r * e[i]) / s;
      standardize(cond[c]);
    }
  }
  return result;
}

}  // namespace copulaboost::greedy
