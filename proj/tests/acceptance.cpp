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

// Acceptance checks. Usage: acceptance [criterion...]; with no arguments
// every criterion runs. Prints one line per criterion and exits non-zero if
// any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "benchmark.hpp"
#include "copulaboost/boosting.hpp"
#include "copulaboost/component.hpp"
#include "copulaboost/copula.hpp"
#include "copulaboost/dvine.hpp"
#include "copulaboost/greedy.hpp"
#include "copulaboost/metrics.hpp"
#include "copulaboost/rng.hpp"
#include "copulaboost/simgen.hpp"
#include "mc_oracle.hpp"
#include "support.hpp"

using namespace copulaboost;
namespace ts = testing_support;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<PitPair> continuous_pits(const std::vector<double>& u) {
  std::vector<PitPair> out;
  for (double v : u) out.push_back(PitPair::continuous(v));
  return out;
}

Outcome gaussian_vine_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 g(2024);
  std::uniform_real_distribution<double> partial(-0.9, 0.9);
  std::uniform_real_distribution<double> unif(0.001, 0.999);
  std::normal_distribution<double> normal;
  const int dim = 4;
  double worst = 0.0;
  for (int v = 0; v < 200; ++v) {
    std::vector<std::vector<double>> rho(dim - 1);
    dvine::DVineModel m;
    for (int t = 0; t < dim - 1; ++t) {
      m.pairs.emplace_back();
      for (int e = 0; e < dim - 1 - t; ++e) {
        rho[t].push_back(partial(g));
        m.pairs.back().emplace_back(copula::Family::Gaussian, rho[t].back());
      }
    }
    m.margins.assign(dim, margins::MarginalModel::gaussian(0, 1));
    const Eigen::MatrixXd corr = ts::dvine_partial_to_corr(rho, dim);
    // Covariates come from the joint law of the vine; independent uniform
    // points under strong dependence drive the chain below the PIT clamp.
    const Eigen::MatrixXd chol = corr.block(1, 1, dim - 1, dim - 1).llt().matrixL();
    for (int k = 0; k < 50; ++k) {
      Eigen::VectorXd e(dim - 1);
      for (int j = 0; j < dim - 1; ++j) e(j) = normal(g);
      const Eigen::VectorXd z = chol * e;
      std::vector<double> u(dim - 1);
      for (int j = 0; j < dim - 1; ++j) u[j] = ts::phi(z(j));
      const double uy = unif(g);
      const auto [mean, sd] = ts::mvn_conditional(corr, z);
      const double want = ts::phi((ts::phi_inv(uy) - mean) / sd);
      const double got = dvine::conditional_cdf(m, PitPair::continuous(uy), continuous_pits(u));
      worst = std::max(worst, std::abs(got - want));
    }
  }
  const double secs = seconds_since(start);
  return {worst < 1e-8 && secs < 60,
          fmt::format("max abs error {:.3g} over 200 vines x 50 points (< 1e-8), {:.1f}s", worst, secs)};
}

Outcome h_function_differences() {
  const auto start = Clock::now();
  const double eps = 1e-6;
  const double taus[] = {-0.85, -0.65, -0.45, -0.25, -0.05, 0.05, 0.25, 0.45, 0.65, 0.85};
  double worst = 0.0;
  int floored = 0;
  std::string where;
  for (auto family : {copula::Family::Gaussian, copula::Family::Clayton, copula::Family::Gumbel}) {
    for (double tau : taus) {
      const auto c = copula::BivariateCopula::from_tau(family, tau);
      for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
          const double u = (i + 0.5) / 20.0;
          const double v = (j + 0.5) / 20.0;
          const double fd = (copula::copula_cdf(c, u, v + eps) - copula::copula_cdf(c, u, v - eps)) / (2 * eps);
          const double h = copula::h_function(c, u, {v, v, false});
          // The difference quotient carries about 1e-10 of rounding error, so
          // below 1e-4 the relative error is taken against 1e-4.
          const double rel = std::abs(h - fd) / std::max(std::abs(fd), 1e-4);
          if (std::abs(fd) < 1e-4) ++floored;
          if (rel > worst) {
            worst = rel;
            where = fmt::format("{} tau={} u={} v={}", copula::family_name(family), tau, u, v);
          }
        }
      }
    }
  }
  const double secs = seconds_since(start);
  return {worst < 1e-5 && secs < 60,
          fmt::format("max relative error {:.3g} at {} (< 1e-5); {} of 12000 points below the 1e-4 floor, {:.1f}s",
                      worst, where, floored, secs)};
}

Outcome bin_integrator() {
  const auto start = Clock::now();
  simgen::SimConfig sc;
  sc.setting = 3;
  sc.seed = 31;
  const data::Dataset d = simgen::simulate(sc, 1)[0].data;
  // A few boosting stages turn the two-valued first residuals into a
  // continuous sample.
  boosting::BoostConfig bc;
  bc.M_max = 3;
  bc.seed = 31;
  const boosting::BoostModel warm = boosting::fit(d, bc);
  const std::vector<double> h = boosting::decision_function(warm, d, warm.M());
  std::vector<double> res(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) res[i] = d.y[i] - metrics::logistic(h[i]);

  Rng rng(31, "acceptance-subsets");
  std::vector<std::size_t> all(d.cols());
  std::iota(all.begin(), all.end(), std::size_t{0});
  int points = 0, binned = 0;
  double worst_excess = -1e300;
  for (int k = 0; k < 20; ++k) {
    rng.shuffle(all);
    const std::vector<std::size_t> subset(all.begin(), all.begin() + 3);
    std::vector<std::vector<double>> cols;
    std::vector<margins::MarginalModel> ms;
    for (std::size_t c : subset) {
      cols.push_back(d.x[c]);
      ms.push_back(margins::fit_margin(d.x[c], d.types[c], margins::MarginMode::Parametric));
    }
    const component::Component comp = component::fit_component(res, cols, ms, subset, {});
    if (comp.mode != component::Mode::Binned) continue;
    ++binned;
    for (int r = 0; r < 5; ++r) {
      const std::size_t row = rng.below(d.rows());
      const std::vector<double> xs = {cols[0][row], cols[1][row], cols[2][row]};
      const auto pits = component::covariate_pits(comp, xs);
      const auto mc = ts::mc_conditional_mean(comp, pits, 1000000, 1000 + 10 * k + r);
      const double got = component::expected_value_binned(comp, pits);
      worst_excess = std::max(worst_excess, std::abs(got - mc.mean) - (3 * mc.se + 0.02));
      ++points;
    }
  }
  const double secs = seconds_since(start);
  return {binned == 20 && worst_excess <= 0 && secs < 600,
          fmt::format("{} binned components, {} points; worst |binned - MC| - (3 SE + 0.02) = {:.3g}, {:.1f}s",
                      binned, points, worst_excess, secs)};
}

Outcome moments_and_poly() {
  double worst = 0.0;
  for (double mu = -3.0; mu <= 3.0 + 1e-12; mu += 0.5) {
    for (double sigma : {0.01, 0.1, 0.25, 0.5, 0.75, 1.0}) {
      const auto m = greedy::normal_moments(mu, sigma, 8);
      for (int j = 0; j <= 8; ++j) {
        const double q = ts::integrate(
            [&](double z) {
              const double s = (z - mu) / sigma;
              return std::pow(z, j) * std::exp(-0.5 * s * s) / (sigma * std::sqrt(2 * M_PI));
            },
            mu - 40 * sigma, mu + 40 * sigma, 1e-15);
        worst = std::max(worst, std::abs(m[j] - q) / std::max(1.0, std::abs(q)));
      }
    }
  }
  const double closed = 0.8 * ts::phi_inv(0.9);
  const double lin = std::abs(greedy::approx_conditional_mean(greedy::QuantilePoly{{0, 1}}, 0.8, 0.9) - closed);
  return {worst < 1e-9 && lin < 1e-6,
          fmt::format("moments max error {:.3g} (< 1e-9), linear poly error {:.3g} (< 1e-6)", worst, lin)};
}

std::vector<copula::PseudoObs> rank_pseudo_obs(const ts::PairSample& s) {
  const auto ru = ts::average_ranks(s.u);
  const auto rv = ts::average_ranks(s.v);
  const double n1 = static_cast<double>(s.u.size()) + 1.0;
  std::vector<copula::PseudoObs> obs;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    obs.push_back(copula::PseudoObs::from(PitPair::continuous(ru[i] / n1), PitPair::continuous(rv[i] / n1)));
  }
  return obs;
}

Outcome family_recovery() {
  const auto start = Clock::now();
  const std::vector<copula::Family> cands = {copula::Family::Gaussian, copula::Family::Clayton,
                                             copula::Family::Gumbel};
  int clayton = 0, gumbel = 0;
  for (int r = 0; r < 100; ++r) {
    const auto a = rank_pseudo_obs(ts::sample_clayton(2.0, 1000, 500 + r));
    if (copula::select_family(a, cands).copula.family() == copula::Family::Clayton) ++clayton;
    const auto b = rank_pseudo_obs(ts::sample_gumbel(2.0, 1000, 900 + r));
    if (copula::select_family(b, cands).copula.family() == copula::Family::Gumbel) ++gumbel;
  }
  const double secs = seconds_since(start);
  return {clayton >= 90 && gumbel >= 90 && secs < 300,
          fmt::format("Clayton {}/100, Gumbel {}/100 (>= 90), {:.1f}s", clayton, gumbel, secs)};
}

Outcome calibration() {
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;
  for (int setting = 1; setting <= 4; ++setting) {
    simgen::SimConfig sc;
    sc.setting = setting;
    sc.n = 10000;
    sc.seed = 6;
    const data::Dataset d = simgen::simulate(sc, 1)[0].data;
    const double ybar = std::accumulate(d.y.begin(), d.y.end(), 0.0) / static_cast<double>(d.rows());
    ok = ok && ybar >= 0.30 && ybar <= 0.36;
    detail += fmt::format("setting {} ybar {:.4f}; ", setting, ybar);
  }
  const double secs = seconds_since(start);
  return {ok && secs < 120, detail + fmt::format("range [0.30, 0.36], {:.1f}s", secs)};
}

Outcome table2_band() {
  const auto start = Clock::now();
  const std::uint64_t seed = 1;
  std::vector<double> aucs;
  std::string per;
  for (std::size_t r = 0; r < 10; ++r) {
    simgen::SimConfig sc;
    sc.setting = 3;
    sc.seed = derive_seed(seed, "simulation", r);
    const auto sims = simgen::simulate(sc, 3);
    const std::vector<data::Dataset> sets = {sims[0].data, sims[1].data, sims[2].data};
    boosting::BoostConfig cfg;
    cfg.L = 4;
    cfg.gamma = 1.0;
    cfg.M_max = bench::default_grid_budget(4);
    cfg.seed = derive_seed(seed, "fit", r);
    const bench::GridResult g = bench::run_grid_replicate(sets, cfg);
    aucs.push_back(g.test_auc);
    per += fmt::format(" {:.3f}", g.test_auc);
  }
  const auto s = bench::summarize(aucs);
  const double secs = seconds_since(start);
  return {s.mean >= 0.74 && s.mean <= 0.82 && secs < 7200,
          fmt::format("mean test AUC {:.4f} (sd {:.4f}) in [0.74, 0.82]; replicates{}; {:.0f}s", s.mean, s.sd,
                      per, secs)};
}

Outcome holdout(const std::string& name, int L, double min_auc, double min_acc) {
  const auto start = Clock::now();
  const std::string path = std::string(COPULABOOST_DATA_DIR) + "/" + name + ".csv";
  const bool wdbc = name == "wdbc";
  const data::Dataset full = wdbc ? bench::load_wdbc(path) : bench::load_boston(path);
  std::vector<double> aucs, accs;
  for (std::uint64_t r = 0; r < 5; ++r) {
    boosting::BoostConfig cfg;
    cfg.L = L;
    cfg.seed = 1 + r;
    const auto h = bench::run_holdout(full, wdbc ? bench::kWdbcTrain : bench::kBostonTrain, cfg, cfg.seed);
    aucs.push_back(h.test.auc);
    accs.push_back(h.test.accuracy);
  }
  const double auc = bench::median(aucs), acc = bench::median(accs);
  const double secs = seconds_since(start);
  std::string detail = fmt::format("median test AUC {:.4f} (>= {})", auc, min_auc);
  if (min_acc > 0) detail += fmt::format(", median test accuracy {:.4f} (>= {})", acc, min_acc);
  return {auc >= min_auc && acc >= min_acc && secs < 1800, detail + fmt::format(", {:.0f}s", secs)};
}

Outcome margins_direction() {
  const auto start = Clock::now();
  const std::uint64_t seed = 1;
  double sum[2] = {0, 0};
  const margins::MarginMode modes[] = {margins::MarginMode::Parametric, margins::MarginMode::Rank};
  for (std::size_t r = 0; r < 10; ++r) {
    simgen::SimConfig sc;
    sc.setting = 3;
    sc.seed = derive_seed(seed, "simulation", r);
    const auto sims = simgen::simulate(sc, 2);
    for (int k = 0; k < 2; ++k) {
      boosting::BoostConfig cfg;
      cfg.L = 4;
      cfg.gamma = 1.0;
      cfg.M_max = 50;
      cfg.margin_mode = modes[k];
      cfg.seed = derive_seed(seed, "fit", r);
      const boosting::BoostModel model = boosting::fit(sims[0].data, cfg);
      std::vector<double> p = boosting::decision_function(model, sims[1].data, model.M());
      for (double& v : p) v = metrics::logistic(v);
      sum[k] += metrics::evaluate(sims[1].data.y, p).auc;
    }
  }
  const double param = sum[0] / 10, rank = sum[1] / 10;
  const double secs = seconds_since(start);
  return {param >= rank - 0.005 && secs < 7200,
          fmt::format("parametric mean test AUC {:.4f}, rank {:.4f} (parametric >= rank - 0.005), {:.0f}s", param,
                      rank, secs)};
}

Outcome property_suites() {
  const auto start = Clock::now();
  std::stringstream list(COPULABOOST_UNIT_TESTS);
  std::string path, failed;
  int count = 0;
  while (std::getline(list, path, '|')) {
    ++count;
    const std::string cmd = "\"" + path + "\" > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) failed += " " + path.substr(path.find_last_of('/') + 1);
  }
  const double secs = seconds_since(start);
  return {failed.empty() && secs < 600,
          fmt::format("{} unit binaries, failures:{}, {:.0f}s", count, failed.empty() ? " none" : failed, secs)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {
      gaussian_vine_oracle,
      h_function_differences,
      bin_integrator,
      moments_and_poly,
      family_recovery,
      calibration,
      table2_band,
      [] { return holdout("wdbc", 3, 0.98, 0.93); },
      [] { return holdout("boston", 5, 0.94, 0.0); },
      margins_direction,
      property_suites,
  };
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) {
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) which.push_back(i);
  }
  bool all = true;
  for (int k : which) {
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << k << "\n";
      return 2;
    }
    Outcome o;
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << ")" << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
