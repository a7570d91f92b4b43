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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "copulaboost/copula.hpp"
#include "copulaboost/special.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace copulaboost::copula;
using copulaboost::PitPair;
namespace ts = testing_support;

namespace {

std::vector<PseudoObs> continuous_obs(const ts::PairSample& s) {
  std::vector<PseudoObs> out;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    out.push_back(PseudoObs::from(PitPair::continuous(s.u[i]),
                                  PitPair::continuous(s.v[i])));
  }
  return out;
}

std::vector<BivariateCopula> family_grid() {
  std::vector<BivariateCopula> out;
  out.emplace_back();
  for (double tau : {-0.8, -0.5, -0.1, 0.1, 0.5, 0.8}) {
    out.push_back(BivariateCopula::from_tau(Family::Gaussian, tau));
    out.push_back(BivariateCopula::from_tau(Family::Clayton, tau));
    out.push_back(BivariateCopula::from_tau(Family::Gumbel, tau));
  }
  return out;
}

double clayton_density(double theta, double u, double v) {
  return (1 + theta) * std::pow(u * v, -theta - 1) *
         std::pow(std::pow(u, -theta) + std::pow(v, -theta) - 1, -1 / theta - 2);
}

}  // namespace

TEST_CASE("copula_cdf examples") {
  CHECK(copula_cdf(BivariateCopula(), 0.3, 0.7) == doctest::Approx(0.21).epsilon(1e-15));
  CHECK(copula_cdf(BivariateCopula(Family::Gaussian, 0.0), 0.3, 0.7) ==
        doctest::Approx(0.21).epsilon(1e-13));
  const BivariateCopula clayton(Family::Clayton, 2.0);
  const double closed = 1.0 / std::sqrt(7.0);
  CHECK(copula_cdf(clayton, 0.5, 0.5) == doctest::Approx(closed).epsilon(1e-14));
  const double by_density = ts::integrate2(
      [](double u, double v) { return clayton_density(2.0, u, v); }, 0, 0.5, 0, 0.5, 1e-11);
  CHECK(std::abs(by_density - closed) < 1e-8);
}

TEST_CASE("copula_cdf domain") {
  CHECK_THROWS_AS(copula_cdf(BivariateCopula(), -0.1, 0.5), std::domain_error);
  CHECK_THROWS_AS(copula_cdf(BivariateCopula(), 0.5, 1.1), std::domain_error);
  CHECK_THROWS(BivariateCopula(Family::Gaussian, 1.0));
  CHECK_THROWS(BivariateCopula(Family::Clayton, -0.5));
  CHECK_THROWS(BivariateCopula(Family::Gumbel, 0.9));
}

TEST_CASE("copula_cdf boundary identities") {
  for (const auto& c : family_grid()) {
    for (double x : {0.0, 0.13, 0.5, 0.87, 1.0}) {
      CHECK(c.cdf(x, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(c.cdf(0.0, x) == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(c.cdf(x, 1.0) == doctest::Approx(x).epsilon(1e-12));
      CHECK(c.cdf(1.0, x) == doctest::Approx(x).epsilon(1e-12));
    }
  }
}

TEST_CASE("copula_pdf examples") {
  CHECK(copula_pdf(BivariateCopula(), 0.4, 0.9) == 1.0);
  const BivariateCopula g(Family::Gaussian, 0.5);
  CHECK(copula_pdf(g, 0.5, 0.5) == doctest::Approx(1 / std::sqrt(0.75)).epsilon(1e-12));
  const double e = 1e-4;
  const double fd = (g.cdf(0.5 + e, 0.5 + e) - g.cdf(0.5 + e, 0.5 - e) -
                     g.cdf(0.5 - e, 0.5 + e) + g.cdf(0.5 - e, 0.5 - e)) / (4 * e * e);
  CHECK(std::abs(fd - 1.154701) < 1e-5);
  CHECK(copula_pdf(BivariateCopula(Family::Clayton, 2.0), 0.3, 0.6) ==
        doctest::Approx(clayton_density(2.0, 0.3, 0.6)).epsilon(1e-12));
}

TEST_CASE("copula_pdf integrates to one") {
  boost::math::quadrature::tanh_sinh<double> q;
  for (const auto& c : family_grid()) {
    auto inner = [&](double u) {
      return q.integrate([&](double v) { return c.pdf(u, v); }, 0.0, 1.0, 1e-9);
    };
    const double total = q.integrate(inner, 0.0, 1.0, 1e-8);
    CHECK_MESSAGE(std::abs(total - 1.0) < 1e-4, family_name(c.family()), " tau ", c.tau());
  }
}

TEST_CASE("h_function examples") {
  CHECK(h_function(BivariateCopula(), 0.3, {0.8, 0.8, false}) ==
        doctest::Approx(0.3).epsilon(1e-15));
  CHECK(h_function(BivariateCopula(Family::Gaussian, 0.5), 0.5, {0.5, 0.5, false}) ==
        doctest::Approx(0.5).epsilon(1e-14));
  const BivariateCopula gumbel(Family::Gumbel, 2.0);
  const double e = 1e-6;
  const double fd = (gumbel.cdf(0.6, 0.4 + e) - gumbel.cdf(0.6, 0.4 - e)) / (2 * e);
  CHECK(std::abs(h_function(gumbel, 0.6, {0.4, 0.4, false}) - fd) < 1e-5);
}

TEST_CASE("h_function discrete conditioning is a difference quotient") {
  const BivariateCopula c(Family::Clayton, 1.5);
  const double u = 0.42, v = 0.7, vm = 0.3;
  const double want = (c.cdf(u, v) - c.cdf(u, vm)) / (v - vm);
  CHECK(h_function(c, u, {v, vm, true}) == doctest::Approx(want).epsilon(1e-13));
  CHECK_THROWS_AS(h_function(c, u, {0.5, 0.5, true}), std::invalid_argument);
}

TEST_CASE("h_function invariants") {
  for (const auto& c : family_grid()) {
    for (double v : {0.01, 0.2, 0.5, 0.8, 0.99}) {
      CHECK(std::abs(h_function(c, 0.0, {v, v, false})) < 1e-10);
      CHECK(std::abs(h_function(c, 1.0, {v, v, false}) - 1.0) < 1e-10);
      double prev = 0.0;
      for (int i = 0; i <= 50; ++i) {
        const double h = h_function(c, i / 50.0, {v, v, false});
        CHECK(h >= prev);
        CHECK(h <= 1.0);
        prev = h;
      }
    }
  }
}

TEST_CASE("Gaussian h-function closed form") {
  for (double rho : {-0.9, -0.4, 0.0, 0.3, 0.7, 0.95}) {
    const BivariateCopula c(Family::Gaussian, rho);
    for (double u : {0.01, 0.2, 0.5, 0.77, 0.999}) {
      for (double v : {0.03, 0.4, 0.6, 0.9}) {
        const double want =
            ts::phi((ts::phi_inv(u) - rho * ts::phi_inv(v)) / std::sqrt(1 - rho * rho));
        CHECK(std::abs(h_function(c, u, {v, v, false}) - want) < 1e-10);
        const double want2 =
            ts::phi((ts::phi_inv(v) - rho * ts::phi_inv(u)) / std::sqrt(1 - rho * rho));
        CHECK(std::abs(h_function_second(c, v, {u, u, false}) - want2) < 1e-10);
      }
    }
  }
}

TEST_CASE("conditional inverses round trip") {
  for (const auto& c : family_grid()) {
    for (double w : {0.001, 0.1, 0.5, 0.9, 0.999}) {
      for (double x : {0.05, 0.5, 0.95}) {
        const double u = c.cond_first_inverse(w, x);
        CHECK(std::abs(c.cond_first(u, x) - w) < 1e-9);
        const double v = c.cond_second_inverse(x, w);
        CHECK(std::abs(c.cond_second(x, v) - w) < 1e-9);
      }
    }
  }
}

TEST_CASE("cdf monotone and 2-increasing on a grid") {
  for (const auto& c : family_grid()) {
    const int g = 20;
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) {
        const double u0 = double(i) / g, u1 = double(i + 1) / g;
        const double v0 = double(j) / g, v1 = double(j + 1) / g;
        CHECK(c.cdf(u1, v0) >= c.cdf(u0, v0));
        CHECK(c.cdf(u0, v1) >= c.cdf(u0, v0));
        const double rect = c.cdf(u1, v1) - c.cdf(u0, v1) - c.cdf(u1, v0) + c.cdf(u0, v0);
        CHECK(rect >= -1e-12);
      }
    }
  }
}

TEST_CASE("tau conversions") {
  CHECK(tau_to_parameter(Family::Gaussian, 0.0) == 0.0);
  CHECK(tau_to_parameter(Family::Clayton, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(parameter_to_tau(Family::Gumbel, 1.0) == 0.0);
  CHECK_THROWS(tau_to_parameter(Family::Clayton, 1.0));
  CHECK_THROWS(tau_to_parameter(Family::Gumbel, -0.1));
  CHECK_THROWS(tau_to_parameter(Family::Gaussian, -1.0));
  for (Family f : {Family::Gaussian, Family::Clayton, Family::Gumbel}) {
    const double lo = f == Family::Gaussian ? -0.98 : 0.01;
    for (int i = 0; i < 50; ++i) {
      const double tau = lo + (0.98 - lo) * i / 49.0;
      CHECK(std::abs(parameter_to_tau(f, tau_to_parameter(f, tau)) - tau) < 1e-12);
    }
  }
}

TEST_CASE("Clayton theta=2 has Kendall tau 0.5 on 1e6 draws") {
  const auto s = ts::sample_clayton(tau_to_parameter(Family::Clayton, 0.5), 1000000, 11);
  CHECK(std::abs(ts::kendall_tau(s.u, s.v) - 0.5) < 0.003);
}

TEST_CASE("library sampling via conditional inverse reproduces tau") {
  for (const auto& c : family_grid()) {
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> u, v;
    for (int i = 0; i < 20000; ++i) {
      u.push_back(unif(g));
      v.push_back(c.cond_second_inverse(u.back(), unif(g)));
    }
    CHECK(std::abs(ts::kendall_tau(u, v) - c.tau()) < 0.02);
  }
}

TEST_CASE("fit_pair on independent data") {
  const auto obs = continuous_obs(ts::sample_independent(1000, 3));
  for (Family f : {Family::Gaussian, Family::Clayton, Family::Gumbel}) {
    const PairFit fit = fit_pair(obs, f);
    CHECK(std::abs(fit.copula.tau()) < 0.05);
  }
}

TEST_CASE("fit_pair Gaussian rho=0.6") {
  const auto obs = continuous_obs(ts::sample_gaussian(0.6, 2000, 4));
  const PairFit fit = fit_pair(obs, Family::Gaussian);
  CHECK(fit.copula.parameter() >= 0.55);
  CHECK(fit.copula.parameter() <= 0.65);
  const double at_truth = pair_log_likelihood(BivariateCopula(Family::Gaussian, 0.6), obs);
  CHECK(fit.log_likelihood >= at_truth - 1e-6);
  CHECK(fit.log_likelihood == doctest::Approx(pair_log_likelihood(fit.copula, obs)).epsilon(1e-12));
  CHECK(fit.aic == doctest::Approx(2.0 - 2.0 * fit.log_likelihood));
}

TEST_CASE("fit_pair Clayton with a dichotomized coordinate") {
  const auto s = ts::sample_clayton(2.0, 2000, 6);
  std::vector<PseudoObs> obs;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    const PitPair second = s.v[i] > 0.5 ? PitPair::discrete(1.0, 0.5)
                                        : PitPair::discrete(0.5, 0.0);
    obs.push_back(PseudoObs::from(PitPair::continuous(s.u[i]), second));
  }
  const PairFit fit = fit_pair(obs, Family::Clayton);
  CHECK(fit.copula.rotation() == 0);
  CHECK(std::abs(fit.copula.parameter() - 2.0) < 0.5);
  CHECK(fit.log_likelihood >= pair_log_likelihood(BivariateCopula(Family::Clayton, 2.0), obs) - 1e-6);
}

TEST_CASE("fit_pair optimizer sanity across families") {
  struct Case {
    Family f;
    double tau;
    ts::PairSample s;
  };
  std::vector<Case> cases = {
      {Family::Clayton, 0.3, ts::sample_clayton(tau_to_parameter(Family::Clayton, 0.3), 800, 8)},
      {Family::Gumbel, 0.6, ts::sample_gumbel(tau_to_parameter(Family::Gumbel, 0.6), 800, 9)},
      {Family::Gaussian, -0.4, ts::sample_gaussian(tau_to_parameter(Family::Gaussian, -0.4), 800, 10)},
  };
  for (auto& c : cases) {
    const auto obs = continuous_obs(c.s);
    const PairFit fit = fit_pair(obs, c.f);
    const double truth = pair_log_likelihood(BivariateCopula::from_tau(c.f, c.tau), obs);
    CHECK(fit.log_likelihood >= truth - 1e-6);
  }
}

TEST_CASE("fit_pair negative dependence uses the rotation") {
  auto s = ts::sample_clayton(2.0, 1000, 12);
  for (double& u : s.u) u = 1.0 - u;
  const PairFit fit = fit_pair(continuous_obs(s), Family::Clayton);
  CHECK(fit.copula.rotation() == 90);
  CHECK(fit.copula.tau() == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("fit_pair errors and degenerate input") {
  std::vector<PseudoObs> few(5);
  CHECK_THROWS_AS(fit_pair(few, Family::Gaussian), std::invalid_argument);
  std::vector<PseudoObs> constant;
  for (int i = 0; i < 50; ++i) {
    constant.push_back(PseudoObs::from(PitPair::continuous(0.3),
                                       PitPair::continuous((i + 0.5) / 50)));
  }
  const PairFit fit = fit_pair(constant, Family::Gumbel);
  CHECK(fit.copula.family() == Family::Independence);
}

TEST_CASE("select_family") {
  SUBCASE("independence wins under the AIC penalty") {
    // One extra parameter wins when the LR statistic exceeds 2, so under the
    // null Independence is kept with probability P(chi2_1 <= 2).
    const double keep = 2.0 * ts::phi(std::sqrt(2.0)) - 1.0;
    const std::vector<Family> cands = {Family::Independence, Family::Gaussian};
    const int runs = 400;
    int hits = 0;
    for (int r = 0; r < runs; ++r) {
      const auto obs = continuous_obs(ts::sample_independent(500, 100 + r));
      hits += select_family(obs, cands).copula.family() == Family::Independence;
    }
    const double sd = std::sqrt(keep * (1 - keep) / runs);
    CHECK(std::abs(double(hits) / runs - keep) < 3 * sd);
  }
  SUBCASE("Clayton and Gumbel recovered") {
    const std::vector<Family> cands = {Family::Gaussian, Family::Clayton, Family::Gumbel};
    int clayton_hits = 0, gumbel_hits = 0;
    for (int r = 0; r < 100; ++r) {
      const auto a = continuous_obs(ts::sample_clayton(2.0, 1000, 300 + r));
      clayton_hits += select_family(a, cands).copula.family() == Family::Clayton;
      const auto b = continuous_obs(ts::sample_gumbel(2.0, 1000, 500 + r));
      gumbel_hits += select_family(b, cands).copula.family() == Family::Gumbel;
    }
    CHECK(clayton_hits >= 90);
    CHECK(gumbel_hits >= 90);
  }
  SUBCASE("single candidate") {
    const auto obs = continuous_obs(ts::sample_independent(200, 7));
    const std::vector<Family> cands = {Family::Gumbel};
    CHECK(select_family(obs, cands).copula.family() == Family::Gumbel);
  }
}

TEST_CASE("mixed likelihood terms") {
  const BivariateCopula c(Family::Gumbel, 1.7);
  const double u = 0.35, v = 0.6, vm = 0.2, um = 0.1;
  PseudoObs cd{u, u, v, vm, false, true};
  CHECK(std::exp(pair_log_likelihood(c, cd)) ==
        doctest::Approx(c.cond_second(u, v) - c.cond_second(u, vm)).epsilon(1e-12));
  PseudoObs dc{u, um, v, v, true, false};
  CHECK(std::exp(pair_log_likelihood(c, dc)) ==
        doctest::Approx(c.cond_first(u, v) - c.cond_first(um, v)).epsilon(1e-12));
  PseudoObs dd{u, um, v, vm, true, true};
  CHECK(std::exp(pair_log_likelihood(c, dd)) ==
        doctest::Approx(c.cdf(u, v) - c.cdf(um, v) - c.cdf(u, vm) + c.cdf(um, vm)).epsilon(1e-12));
}

TEST_CASE("prepared conditional map agrees with condition_first") {
  const std::vector<PitPair> givens = {
      PitPair::continuous(0.03), PitPair::continuous(0.5), PitPair::continuous(0.97),
      PitPair::discrete(0.6, 0.25), PitPair::discrete(1.0, 0.7)};
  const std::vector<PitPair> targets = {
      PitPair::continuous(0.1), PitPair::continuous(0.64), PitPair::discrete(0.45, 0.2),
      PitPair::discrete(1.0, 0.8), PitPair::discrete(0.3, 0.0)};
  for (const auto& c : family_grid()) {
    for (const auto& g : givens) {
      const FirstConditional map(c, g);
      for (const auto& t : targets) {
        const PitPair want = condition_first(c, t, g);
        const PitPair got = map(t);
        CHECK(got.is_discrete == want.is_discrete);
        CHECK(got.u == doctest::Approx(want.u).epsilon(1e-13));
        CHECK(got.u_minus == doctest::Approx(want.u_minus).epsilon(1e-13));
      }
    }
  }
}
