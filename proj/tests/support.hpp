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

// Test-only oracles. Nothing here calls into the library's numerical paths;
// each helper is an independent route to a quantity the library computes.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace testing_support {

inline double phi(double x) {
  return boost::math::cdf(boost::math::normal_distribution<double>(), x);
}
inline double phi_inv(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

// Adaptive Gauss-Kronrod over [a, b].
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-13) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, 15, tol, &err);
}

// Nested 2D integral over [a1, b1] x [a2, b2].
inline double integrate2(const std::function<double(double, double)>& f,
                         double a1, double b1, double a2, double b2,
                         double tol = 1e-10) {
  return integrate(
      [&](double x) {
        return integrate([&](double y) { return f(x, y); }, a2, b2, tol);
      },
      a1, b1, tol);
}

// Bivariate normal CDF by one-dimensional quadrature of the conditional.
inline double binorm_cdf_quadrature(double h, double k, double rho) {
  const double s = std::sqrt(1.0 - rho * rho);
  auto f = [&](double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI) *
           phi((k - rho * x) / s);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, -40.0, h, 1e-15);
}

// Kendall's tau-b in O(n log n) (Knight's algorithm).
inline double kendall_tau(std::vector<double> x, std::vector<double> y) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[idx[i]];
    ys[i] = y[idx[i]];
  }
  auto pairs = [](std::uint64_t m) { return m * (m - 1) / 2; };
  std::uint64_t t1 = 0, t12 = 0;  // ties in x, ties in (x, y)
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && xs[j] == xs[i]) ++j;
    t1 += pairs(j - i);
    for (std::size_t a = i; a < j;) {
      std::size_t b = a;
      while (b < j && ys[b] == ys[a]) ++b;
      t12 += pairs(b - a);
      a = b;
    }
    i = j;
  }
  // Count swaps while merge-sorting ys.
  std::uint64_t swaps = 0;
  std::vector<double> buf(n);
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (ys[j] < ys[i]) {
          swaps += mid - i;
          buf[k++] = ys[j++];
        } else {
          buf[k++] = ys[i++];
        }
      }
      while (i < mid) buf[k++] = ys[i++];
      while (j < hi) buf[k++] = ys[j++];
    }
    std::copy(buf.begin(), buf.end(), ys.begin());
  }
  std::uint64_t t2 = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && ys[j] == ys[i]) ++j;
    t2 += pairs(j - i);
    i = j;
  }
  const double n0 = static_cast<double>(pairs(n));
  const double concord_minus_discord =
      n0 - static_cast<double>(t1) - static_cast<double>(t2) +
      static_cast<double>(t12) - 2.0 * static_cast<double>(swaps);
  return concord_minus_discord /
         std::sqrt((n0 - static_cast<double>(t1)) * (n0 - static_cast<double>(t2)));
}

// Brute-force O(n^2) Kendall tau-a for small samples without ties.
inline double kendall_tau_brute(const std::vector<double>& x,
                                const std::vector<double>& y) {
  double s = 0.0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = (x[i] - x[j]) * (y[i] - y[j]);
      s += p > 0 ? 1.0 : (p < 0 ? -1.0 : 0.0);
    }
  }
  return s / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

// Spearman rank correlation (average ranks).
inline std::vector<double> average_ranks(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && x[idx[j]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j - 1) + 1.0;
    for (std::size_t k = i; k < j; ++k) r[idx[k]] = avg;
    i = j;
  }
  return r;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  return pearson(average_ranks(a), average_ranks(b));
}

// Conditional distribution of Z_0 given Z_1..Z_d = z for a standard
// multivariate normal with correlation matrix `corr`: returns (mean, sd).
inline std::pair<double, double> mvn_conditional(const Eigen::MatrixXd& corr,
                                                 const Eigen::VectorXd& z) {
  const Eigen::Index d = corr.rows() - 1;
  const Eigen::VectorXd s01 = corr.block(0, 1, 1, d).transpose();
  const Eigen::MatrixXd s11 = corr.block(1, 1, d, d);
  const Eigen::VectorXd w = s11.ldlt().solve(s01);
  return {w.dot(z), std::sqrt(1.0 - s01.dot(w))};
}

// Correlation matrix of a Gaussian D-vine with partial correlations
// partial[t][e] (tree t, edge e couples variables e and e+t+1 given those in
// between). Uses the standard recursion from partial to full correlations.
inline Eigen::MatrixXd dvine_partial_to_corr(
    const std::vector<std::vector<double>>& partial, int dim) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(dim, dim);
  for (int t = 0; t < dim - 1; ++t) {
    for (int e = 0; e + t + 1 < dim; ++e) {
      const int i = e;
      const int j = e + t + 1;
      if (t == 0) {
        r(i, j) = r(j, i) = partial[0][e];
        continue;
      }
      // Conditioning set K = {i+1, ..., j-1}.
      const int k = t;
      Eigen::MatrixXd rkk = r.block(i + 1, i + 1, k, k);
      Eigen::VectorXd rik = r.block(i, i + 1, 1, k).transpose();
      Eigen::VectorXd rjk = r.block(j, i + 1, 1, k).transpose();
      Eigen::LDLT<Eigen::MatrixXd> ldlt(rkk);
      const double a = rik.dot(ldlt.solve(rjk));
      const double vi = 1.0 - rik.dot(ldlt.solve(rik));
      const double vj = 1.0 - rjk.dot(ldlt.solve(rjk));
      r(i, j) = r(j, i) = a + partial[t][e] * std::sqrt(vi * vj);
    }
  }
  return r;
}

// Independent copula samplers (Marshall-Olkin frailty constructions and the
// Gaussian closed form), used to generate data with a known generator.
struct PairSample {
  std::vector<double> u, v;
};

inline PairSample sample_gaussian(double rho, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> z;
  PairSample s;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = z(g);
    const double b = rho * a + std::sqrt(1 - rho * rho) * z(g);
    s.u.push_back(phi(a));
    s.v.push_back(phi(b));
  }
  return s;
}

inline PairSample sample_clayton(double theta, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::gamma_distribution<double> frailty(1.0 / theta, 1.0);
  std::exponential_distribution<double> e(1.0);
  PairSample s;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = frailty(g);
    s.u.push_back(std::pow(1.0 + e(g) / v, -1.0 / theta));
    s.v.push_back(std::pow(1.0 + e(g) / v, -1.0 / theta));
  }
  return s;
}

inline PairSample sample_gumbel(double theta, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> unif(0.0, M_PI);
  std::exponential_distribution<double> e(1.0);
  const double alpha = 1.0 / theta;
  PairSample s;
  for (std::size_t i = 0; i < n; ++i) {
    double stable = 1.0;
    if (theta > 1.0) {
      const double w = unif(g);
      const double ex = e(g);
      stable = std::sin(alpha * w) / std::pow(std::sin(w), 1.0 / alpha) *
               std::pow(std::sin((1.0 - alpha) * w) / ex, (1.0 - alpha) / alpha);
    }
    s.u.push_back(std::exp(-std::pow(e(g) / stable, alpha)));
    s.v.push_back(std::exp(-std::pow(e(g) / stable, alpha)));
  }
  return s;
}

inline PairSample sample_independent(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  PairSample s;
  for (std::size_t i = 0; i < n; ++i) {
    s.u.push_back(unif(g));
    s.v.push_back(unif(g));
  }
  return s;
}

}  // namespace testing_support
