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

#include "copulaboost/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "json.hpp"

#include "copulaboost/errors.hpp"
#include "copulaboost/margins.hpp"
#include "copulaboost/metrics.hpp"
#include "copulaboost/rng.hpp"
#include "copulaboost/special.hpp"

namespace copulaboost::simgen {

namespace {

using nlohmann::json;
using Set = std::vector<std::size_t>;  // ascending

Set set_union(const Set& a, const Set& b) {
  Set out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Set set_intersection(const Set& a, const Set& b) {
  Set out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Set set_difference(const Set& a, const Set& b) {
  Set out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Set with(Set s, std::size_t v) {
  s.insert(std::lower_bound(s.begin(), s.end(), v), v);
  return s;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// A node of tree k + 1, i.e. an edge of tree k (or a variable for k = 0).
struct Node {
  Set complete;
  VineEdge edge;  // unused for variables
};

std::vector<std::pair<std::size_t, std::size_t>> prufer_tree(std::size_t n, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (n < 2) return edges;
  if (n == 2) return {{0, 1}};
  std::vector<std::size_t> seq(n - 2);
  for (auto& s : seq) s = rng.below(n);
  std::vector<std::size_t> degree(n, 1);
  for (auto s : seq) ++degree[s];
  std::set<std::size_t> leaves;
  for (std::size_t v = 0; v < n; ++v) {
    if (degree[v] == 1) leaves.insert(v);
  }
  for (auto s : seq) {
    const std::size_t leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    edges.emplace_back(leaf, s);
    if (--degree[s] == 1) leaves.insert(s);
  }
  const std::size_t a = *leaves.begin();
  const std::size_t b = *std::next(leaves.begin());
  edges.emplace_back(a, b);
  return edges;
}

// Uniform spanning tree by loop-erased random walks.
std::vector<std::pair<std::size_t, std::size_t>> wilson_tree(
    const std::vector<std::vector<std::size_t>>& adj, Rng& rng) {
  const std::size_t n = adj.size();
  std::vector<bool> in_tree(n, false);
  std::vector<std::size_t> next(n, 0);
  in_tree[rng.below(n)] = true;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t start = 0; start < n; ++start) {
    std::size_t v = start;
    while (!in_tree[v]) {
      next[v] = adj[v][rng.below(adj[v].size())];
      v = next[v];
    }
    for (v = start; !in_tree[v]; v = next[v]) {
      in_tree[v] = true;
      edges.emplace_back(v, next[v]);
    }
  }
  return edges;
}

Node join(const Node& x, const Node& y) {
  Node out;
  out.complete = set_union(x.complete, y.complete);
  const Set given = set_intersection(x.complete, y.complete);
  const Set conditioned = set_difference(out.complete, given);
  if (conditioned.size() != 2) throw std::logic_error("joined nodes violate proximity");
  out.edge = {conditioned[0], conditioned[1], given};
  return out;
}

VineArray edges_to_array(std::size_t dim, std::vector<std::vector<VineEdge>> trees) {
  VineArray a(dim, std::vector<std::size_t>(dim, 0));
  Set remaining(dim);
  std::iota(remaining.begin(), remaining.end(), 0);
  for (std::size_t k = dim; k-- > 1;) {
    const VineEdge& top = trees[k - 1].front();
    const std::size_t x = top.b;
    a[k][k] = x;
    for (std::size_t t = 0; t < k; ++t) {
      auto& level = trees[t];
      auto it = std::find_if(level.begin(), level.end(),
                             [&](const VineEdge& e) { return e.a == x || e.b == x; });
      if (it == level.end() ||
          std::find_if(std::next(it), level.end(), [&](const VineEdge& e) {
            return e.a == x || e.b == x;
          }) != level.end()) {
        throw std::logic_error("vine variable is not removable");
      }
      a[t][k] = it->a == x ? it->b : it->a;
      level.erase(it);
    }
    remaining.erase(std::find(remaining.begin(), remaining.end(), x));
  }
  a[0][0] = remaining.front();
  return a;
}

double draw_tau(Rng& rng, double bound) { return bound > 0.0 ? rng.uniform(0.0, bound) : 0.0; }

copula::BivariateCopula draw_pair(Rng& rng, std::span<const copula::Family> families,
                                  double bound) {
  const copula::Family f = families[rng.below(families.size())];
  const double tau = draw_tau(rng, bound);
  if (tau <= 0.0 || f == copula::Family::Independence) return {};
  return copula::BivariateCopula::from_tau(f, tau);
}

json pair_json(const copula::BivariateCopula& c) {
  return {{"family", std::string(copula::family_name(c.family()))},
          {"parameter", c.parameter()},
          {"rotation", c.rotation()},
          {"tau", c.tau()}};
}

const std::vector<copula::Family> kSimFamilies = {
    copula::Family::Gaussian, copula::Family::Clayton, copula::Family::Gumbel};

}  // namespace

std::string_view block_name(Block b) {
  switch (b) {
    case Block::Gamma: return "gamma";
    case Block::Beta: return "beta";
    case Block::Bernoulli: return "bernoulli";
    case Block::StudentT: return "t";
  }
  return "?";
}

double ColumnMargin::quantile(double u) const {
  u = clamp_unit(u);
  switch (block) {
    case Block::Gamma: return boost::math::quantile(boost::math::gamma_distribution<>(2.0, 0.5), u);
    case Block::Beta: return boost::math::quantile(boost::math::beta_distribution<>(3.0, 1.0), u);
    case Block::Bernoulli: return u > 1.0 - param ? 1.0 : 0.0;
    case Block::StudentT: return boost::math::quantile(boost::math::students_t(param), u);
  }
  return 0.0;
}

double ColumnMargin::cdf(double x) const {
  switch (block) {
    case Block::Gamma:
      return x <= 0.0 ? 0.0 : boost::math::cdf(boost::math::gamma_distribution<>(2.0, 0.5), x);
    case Block::Beta:
      return x <= 0.0 ? 0.0 : x >= 1.0 ? 1.0 : boost::math::cdf(boost::math::beta_distribution<>(3.0, 1.0), x);
    case Block::Bernoulli: return x < 0.0 ? 0.0 : x < 1.0 ? 1.0 - param : 1.0;
    case Block::StudentT: return boost::math::cdf(boost::math::students_t(param), x);
  }
  return 0.0;
}

PitPair ColumnMargin::pit(double x) const {
  if (discrete()) return margins::MarginalModel::bernoulli(param).pit(x);
  return PitPair::continuous(clamp_unit(cdf(x)));
}

margins::VarType ColumnMargin::var_type() const {
  return discrete() ? margins::VarType::Binary : margins::VarType::Continuous;
}

std::vector<ColumnMargin> default_margins(std::size_t p, double discrete_fraction) {
  if (!(discrete_fraction >= 0.0 && discrete_fraction <= 1.0)) {
    throw std::invalid_argument("discrete fraction must lie in [0, 1]");
  }
  const auto nb = static_cast<std::size_t>(std::floor(discrete_fraction * static_cast<double>(p) + 1e-9));
  const std::size_t rest = p - nb;
  const std::size_t ng = rest / 3 + (rest % 3 > 0 ? 1 : 0);
  const std::size_t nbeta = rest / 3 + (rest % 3 > 1 ? 1 : 0);
  const std::size_t nt = rest - ng - nbeta;
  auto spaced = [](double lo, double hi, std::size_t k, std::size_t count) {
    return count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
  };
  std::vector<ColumnMargin> out;
  for (std::size_t k = 0; k < ng; ++k) out.push_back({Block::Gamma, 0.0});
  for (std::size_t k = 0; k < nbeta; ++k) out.push_back({Block::Beta, 0.0});
  for (std::size_t k = 0; k < nb; ++k) out.push_back({Block::Bernoulli, spaced(0.2, 0.8, k, nb)});
  for (std::size_t k = 0; k < nt; ++k) out.push_back({Block::StudentT, spaced(3.0, 8.0, k, nt)});
  return out;
}

Eigen::MatrixXd random_correlation(std::size_t p, std::uint64_t seed, double half_width) {
  Rng rng(seed, "correlation");
  Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t i = k + 1; i < p; ++i) partial(k, i) = rng.uniform(-half_width, half_width);
  }
  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(p, p);
  for (std::size_t k = 0; k + 1 < p; ++k) {
    for (std::size_t i = k + 1; i < p; ++i) {
      double r = partial(k, i);
      for (std::size_t l = k; l-- > 0;) {
        r = r * std::sqrt((1.0 - partial(l, i) * partial(l, i)) * (1.0 - partial(l, k) * partial(l, k))) +
            partial(l, i) * partial(l, k);
      }
      R(k, i) = R(i, k) = r;
    }
  }
  return R;
}

CovariateSpec make_covariate_spec(std::size_t p, double discrete_fraction, std::uint64_t seed) {
  return {default_margins(p, discrete_fraction), random_correlation(p, seed)};
}

Covariates gen_covariates(std::size_t n, const CovariateSpec& spec, std::uint64_t seed) {
  const std::size_t p = spec.p();
  if (static_cast<std::size_t>(spec.R.rows()) != p || static_cast<std::size_t>(spec.R.cols()) != p) {
    throw DataError("correlation matrix does not match the margins");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(spec.R);
  if (llt.info() != Eigen::Success) throw DataError("correlation matrix is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  Rng rng(seed, "covariates");
  Covariates out;
  out.x.assign(p, std::vector<double>(n));
  out.u.assign(p, std::vector<double>(n));
  Eigen::VectorXd e(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < p; ++c) e(c) = rng.normal();
    const Eigen::VectorXd z = L * e;
    for (std::size_t c = 0; c < p; ++c) {
      const double u = clamp_unit(special::norm_cdf(z(c)));
      out.u[c][i] = u;
      out.x[c][i] = spec.margins[c].quantile(u);
    }
  }
  return out;
}

double calibrate_intercept(std::span<const double> eta, double target) {
  if (eta.empty()) throw std::invalid_argument("no predictor values to calibrate");
  if (!(target > 0.0 && target < 1.0)) throw std::invalid_argument("target must lie in (0, 1)");
  const auto [mn, mx] = std::minmax_element(eta.begin(), eta.end());
  double lo = metrics::logit(target) - *mx;
  double hi = metrics::logit(target) - *mn;
  auto mean_prob = [&](double b0) {
    double s = 0.0;
    for (double e : eta) s += metrics::logistic(b0 + e);
    return s / static_cast<double>(eta.size());
  };
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_prob(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<Term> random_terms(std::size_t p, std::span<const std::size_t> counts,
                               std::uint64_t seed) {
  Rng rng(seed, "terms");
  std::vector<Term> out;
  std::vector<std::size_t> cols(p);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (k + 1 > p) throw std::invalid_argument("interaction order exceeds the column count");
    for (std::size_t r = 0; r < counts[k]; ++r) {
      std::iota(cols.begin(), cols.end(), 0);
      // Partial Fisher-Yates: the first k + 1 entries form a uniform subset.
      for (std::size_t i = 0; i <= k; ++i) std::swap(cols[i], cols[i + rng.below(p - i)]);
      Term t;
      t.columns.assign(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(k + 1));
      std::sort(t.columns.begin(), t.columns.end());
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      t.beta = sign * rng.uniform(0.5, 1.5);
      out.push_back(std::move(t));
    }
  }
  return out;
}

double linear_predictor(std::span<const Term> terms,
                        const std::vector<std::vector<double>>& x, std::size_t row) {
  double eta = 0.0;
  for (const auto& t : terms) {
    double prod = t.beta;
    for (std::size_t c : t.columns) {
      if (c >= x.size()) throw std::out_of_range("term references a missing column");
      prod *= x[c][row];
    }
    eta += prod;
  }
  return eta;
}

bool VineEdge::operator<(const VineEdge& o) const {
  return std::tie(a, b, given) < std::tie(o.a, o.b, o.given);
}

std::vector<std::vector<VineEdge>> vine_edges(const VineArray& a) {
  const std::size_t d = a.size();
  std::vector<std::vector<VineEdge>> trees(d > 0 ? d - 1 : 0);
  for (std::size_t j = 1; j < d; ++j) {
    Set given;
    for (std::size_t t = 0; t < j; ++t) {
      const std::size_t x = a[j][j];
      const std::size_t y = a[t][j];
      trees[t].push_back({std::min(x, y), std::max(x, y), given});
      given = with(given, y);
    }
  }
  for (auto& t : trees) std::sort(t.begin(), t.end());
  return trees;
}

void validate_vine_array(const VineArray& a) {
  const std::size_t d = a.size();
  for (const auto& row : a) {
    if (row.size() != d) throw std::invalid_argument("vine array must be square");
  }
  std::vector<bool> seen(d, false);
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t v = a[j][j];
    if (v >= d || seen[v]) throw std::invalid_argument("diagonal is not a permutation");
    seen[v] = true;
  }
  for (std::size_t j = 1; j < d; ++j) {
    Set before;
    for (std::size_t k = 0; k < j; ++k) before = with(before, a[k][k]);
    Set col;
    for (std::size_t t = 0; t < j; ++t) col = with(col, a[t][j]);
    if (col != before) {
      throw std::invalid_argument("column " + std::to_string(j) +
                                  " must pair its variable with every earlier one");
    }
  }
  const auto trees = vine_edges(a);
  std::map<Set, const VineEdge*> prev;  // complete set -> edge of the previous tree
  for (std::size_t t = 0; t < trees.size(); ++t) {
    std::map<Set, const VineEdge*> cur;
    std::map<Set, std::size_t> node_id;
    if (t == 0) {
      for (std::size_t v = 0; v < d; ++v) node_id[{v}] = v;
    } else {
      for (const auto& [s, e] : prev) node_id.emplace(s, node_id.size());
    }
    UnionFind uf(node_id.size());
    for (const auto& e : trees[t]) {
      const Set x = with(e.given, e.a);
      const Set y = with(e.given, e.b);
      const Set complete = with(x, e.b);
      if (!cur.emplace(complete, &e).second) throw std::invalid_argument("repeated vine edge");
      const auto ix = node_id.find(x);
      const auto iy = node_id.find(y);
      if (ix == node_id.end() || iy == node_id.end()) {
        throw std::invalid_argument("edge in tree " + std::to_string(t + 1) + " joins missing nodes");
      }
      if (t > 0) {
        // Proximity: both joined edges contain the shared given set as a parent.
        for (const Set* s : {&x, &y}) {
          const VineEdge& pe = *prev.at(*s);
          if (with(pe.given, pe.a) != e.given && with(pe.given, pe.b) != e.given) {
            throw std::invalid_argument("proximity condition fails in tree " + std::to_string(t + 1));
          }
        }
      }
      if (!uf.unite(ix->second, iy->second)) {
        throw std::invalid_argument("tree " + std::to_string(t + 1) + " contains a cycle");
      }
    }
    prev = std::move(cur);
  }
}

VineArray sample_rvine_structure(std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("vine dimension must be positive");
  Rng rng(seed, "rvine-structure");
  std::vector<Node> nodes(dim);
  for (std::size_t v = 0; v < dim; ++v) nodes[v].complete = {v};
  std::vector<std::vector<VineEdge>> trees;
  std::vector<std::pair<std::size_t, std::size_t>> links = prufer_tree(dim, rng);
  while (!links.empty()) {
    std::vector<Node> next;
    for (const auto& [x, y] : links) next.push_back(join(nodes[x], nodes[y]));
    std::vector<VineEdge> level;
    for (const auto& nd : next) level.push_back(nd.edge);
    trees.push_back(std::move(level));
    // Proximity graph: edges of this tree sharing an endpoint.
    std::vector<std::vector<std::size_t>> adj(links.size());
    for (std::size_t i = 0; i < links.size(); ++i) {
      for (std::size_t k = i + 1; k < links.size(); ++k) {
        const auto& [a, b] = links[i];
        const auto& [c, e] = links[k];
        if (a == c || a == e || b == c || b == e) {
          adj[i].push_back(k);
          adj[k].push_back(i);
        }
      }
    }
    nodes = std::move(next);
    links = nodes.size() > 1 ? wilson_tree(adj, rng) : decltype(links){};
  }
  return edges_to_array(dim, std::move(trees));
}

RVine random_rvine(std::size_t dim, std::span<const copula::Family> families,
                   double b1, std::uint64_t seed) {
  if (families.empty()) throw std::invalid_argument("no copula families to draw from");
  RVine v;
  v.array = sample_rvine_structure(dim, seed);
  Rng rng(seed, "rvine-pairs");
  v.pairs.assign(dim, std::vector<copula::BivariateCopula>(dim));
  for (std::size_t j = 1; j < dim; ++j) {
    for (std::size_t t = 0; t < j; ++t) {
      v.pairs[t][j] = draw_pair(rng, families, b1 / static_cast<double>(t + 1));
    }
  }
  return v;
}

std::vector<std::vector<double>> simulate_rvine(const RVine& vine, std::size_t n,
                                                std::uint64_t seed) {
  validate_vine_array(vine.array);
  const std::size_t d = vine.dim();
  // Relabel to the natural order: variable a[j][j] becomes j.
  std::vector<std::size_t> pos(d);
  for (std::size_t j = 0; j < d; ++j) pos[vine.array[j][j]] = j;
  std::vector<std::vector<std::size_t>> nat(d, std::vector<std::size_t>(d, 0));
  std::vector<std::vector<std::size_t>> mx(d, std::vector<std::size_t>(d, 0));
  for (std::size_t j = 0; j < d; ++j) {
    std::size_t m = 0;
    for (std::size_t t = 0; t < j; ++t) {
      nat[t][j] = pos[vine.array[t][j]];
      m = std::max(m, nat[t][j]);
      mx[t][j] = m;
    }
  }
  for (std::size_t j = 1; j < d; ++j) {
    for (std::size_t t = 1; t < j; ++t) {
      const std::size_t m = mx[t][j];
      if (nat[t][j] != m && nat[t - 1][m] != nat[t][j]) {
        throw std::logic_error("vine array lacks a required conditional distribution");
      }
    }
  }

  Rng rng(seed, "rvine-sample");
  std::vector<std::vector<double>> out(d, std::vector<double>(n));
  // v[t][j] = F(j | first t partners), w[t][j] = F(partner t-1 | j, earlier).
  std::vector<std::vector<double>> v(d + 1, std::vector<double>(d));
  std::vector<std::vector<double>> w(d + 1, std::vector<double>(d));
  auto partner_value = [&](std::size_t t, std::size_t j) {
    const std::size_t m = mx[t][j];
    return nat[t][j] == m ? v[t][m] : w[t][m];
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double q = rng.uniform();
      for (std::size_t t = j; t-- > 0;) {
        q = clamp_unit(vine.pairs[t][j].cond_second_inverse(partner_value(t, j), q));
      }
      v[0][j] = q;
      for (std::size_t t = 0; t < j; ++t) {
        const double s = partner_value(t, j);
        v[t + 1][j] = clamp_unit(vine.pairs[t][j].cond_second(s, v[t][j]));
        w[t + 1][j] = clamp_unit(vine.pairs[t][j].cond_first(s, v[t][j]));
      }
      out[vine.array[j][j]][i] = q;
    }
  }
  return out;
}

double effect_expectation(const dvine::DVineModel& vine,
                          std::span<const PitPair> x_pits, int K) {
  if (K < 1) throw std::invalid_argument("bin count must be positive");
  const auto chain = dvine::covariate_chain(vine, x_pits);
  const dvine::ResponseMap response(vine, chain);
  double e = 0.0;
  double prev = 0.0;
  for (int l = 1; l <= K; ++l) {
    const double f = l == K ? 1.0
                            : response(PitPair::continuous(double(l) / K)).u;
    e += (-1.0 + (2.0 * l - 1.0) / K) * (f - prev);
    prev = f;
  }
  return e;
}

std::size_t SimConfig::calibration_size() const {
  if (calibration > 0) return calibration;
  return setting == 3 ? kEffectCalibrationSize : kCalibrationSize;
}

std::vector<Simulation> simulate(const SimConfig& cfg, std::size_t count) {
  if (cfg.setting < 1 || cfg.setting > 4) throw std::invalid_argument("setting must be 1..4");
  if (cfg.n == 0 || cfg.p == 0) throw std::invalid_argument("n and p must be positive");
  if (!(cfg.target > 0.0 && cfg.target < 1.0)) throw std::invalid_argument("target must lie in (0, 1)");
  const std::vector<ColumnMargin> margins = default_margins(cfg.p, cfg.discrete_fraction);
  json info = {{"setting", cfg.setting},
               {"n", cfg.n},
               {"p", cfg.p},
               {"discrete_fraction", cfg.discrete_fraction},
               {"target", cfg.target},
               {"seed", cfg.seed}};
  json margin_info = json::array();
  for (const auto& m : margins) margin_info.push_back({{"block", std::string(block_name(m.block))}, {"param", m.param}});
  info["margins"] = margin_info;

  auto make_dataset = [&](std::vector<std::vector<double>> x, std::vector<double> y) {
    data::Dataset d;
    d.response = "y";
    for (std::size_t c = 0; c < cfg.p; ++c) {
      d.names.push_back("x" + std::to_string(c + 1));
      d.types.push_back(margins[c].var_type());
    }
    d.x = std::move(x);
    d.y = std::move(y);
    return d;
  };
  auto draw_y = [&](std::span<const double> eta, double b0, std::size_t r) {
    Rng rng(cfg.seed, "response", r);
    std::vector<double> y(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) {
      y[i] = rng.uniform() < metrics::logistic(b0 + eta[i]) ? 1.0 : 0.0;
    }
    return y;
  };

  std::vector<Simulation> out;
  if (cfg.setting == 2) {
    if (cfg.d >= cfg.p) throw std::invalid_argument("setting 2 needs d < p");
    const RVine vine = random_rvine(cfg.d + 1, kSimFamilies, cfg.tau_bound, derive_seed(cfg.seed, "model"));
    Rng perm_rng(cfg.seed, "positions");
    std::vector<std::size_t> position(cfg.p);
    std::iota(position.begin(), position.end(), 0);
    perm_rng.shuffle(position);
    json pairs = json::array();
    for (std::size_t t = 0; t + 1 < vine.dim(); ++t) {
      json level = json::array();
      for (std::size_t j = t + 1; j < vine.dim(); ++j) level.push_back(pair_json(vine.pairs[t][j]));
      pairs.push_back(std::move(level));
    }
    std::vector<std::size_t> neighbours(position.begin(), position.begin() + static_cast<std::ptrdiff_t>(cfg.d));
    info["vine"] = {{"array", vine.array}, {"pairs", pairs}, {"response_variable", 0},
                    {"covariate_columns", neighbours}};
    info["p_y"] = cfg.target;
    for (std::size_t r = 0; r < count; ++r) {
      const auto u = simulate_rvine(vine, cfg.n, derive_seed(cfg.seed, "rvine", r));
      Rng ind(cfg.seed, "independent", r);
      std::vector<std::vector<double>> x(cfg.p, std::vector<double>(cfg.n));
      for (std::size_t s = 0; s < cfg.p; ++s) {
        const std::size_t c = position[s];
        for (std::size_t i = 0; i < cfg.n; ++i) {
          const double src = s < cfg.d ? u[s + 1][i] : ind.uniform();
          x[c][i] = margins[c].quantile(src);
        }
      }
      std::vector<double> y(cfg.n);
      for (std::size_t i = 0; i < cfg.n; ++i) y[i] = u[0][i] > 1.0 - cfg.target ? 1.0 : 0.0;
      out.push_back({make_dataset(std::move(x), std::move(y)), "", 0.0});
    }
    for (auto& s : out) s.info = info.dump();
    return out;
  }

  const CovariateSpec spec{margins, random_correlation(cfg.p, derive_seed(cfg.seed, "model"))};
  std::function<std::vector<double>(const Covariates&)> predictor;
  std::vector<Term> terms;
  std::vector<std::pair<std::vector<std::size_t>, dvine::DVineModel>> effects;
  if (cfg.setting == 1 || cfg.setting == 4) {
    std::vector<std::size_t> counts = {20, 45, 20, 1};
    if (cfg.setting == 4) {
      if (cfg.interaction < 1) throw std::invalid_argument("interaction order must be positive");
      counts.assign(cfg.interaction, 0);
      counts.back() = cfg.terms4;
    }
    terms = random_terms(cfg.p, counts, derive_seed(cfg.seed, "model"));
    json ti = json::array();
    for (const auto& t : terms) ti.push_back({{"columns", t.columns}, {"beta", t.beta}});
    info["terms"] = ti;
    predictor = [&](const Covariates& cov) {
      const std::size_t n = cov.x.empty() ? 0 : cov.x[0].size();
      std::vector<double> eta(n);
      for (std::size_t i = 0; i < n; ++i) eta[i] = linear_predictor(terms, cov.x, i);
      return eta;
    };
  } else {
    if (cfg.effect_size == 0 || cfg.effect_size > cfg.p) {
      throw std::invalid_argument("effect size must lie in 1..p");
    }
    Rng rng(cfg.seed, "effects");
    json ei = json::array();
    std::vector<std::size_t> cols(cfg.p);
    for (std::size_t m = 0; m < cfg.effects; ++m) {
      std::iota(cols.begin(), cols.end(), 0);
      for (std::size_t i = 0; i < cfg.effect_size; ++i) std::swap(cols[i], cols[i + rng.below(cfg.p - i)]);
      std::vector<std::size_t> chosen(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(cfg.effect_size));
      dvine::DVineModel v;
      const std::size_t dim = cfg.effect_size + 1;
      v.margins.resize(dim);
      v.pairs.resize(dim - 1);
      json pi = json::array();
      for (std::size_t t = 0; t + 1 < dim; ++t) {
        json level = json::array();
        for (std::size_t e = 0; e + t + 1 < dim; ++e) {
          v.pairs[t].push_back(draw_pair(rng, kSimFamilies, cfg.tau_bound / static_cast<double>(t + 1)));
          level.push_back(pair_json(v.pairs[t].back()));
        }
        pi.push_back(std::move(level));
      }
      ei.push_back({{"columns", chosen}, {"pairs", pi}});
      effects.emplace_back(std::move(chosen), std::move(v));
    }
    info["effects"] = ei;
    info["effect_bins"] = cfg.bins;
    predictor = [&](const Covariates& cov) {
      const std::size_t n = cov.x.empty() ? 0 : cov.x[0].size();
      std::vector<double> eta(n, 0.0);
      std::vector<PitPair> pits(cfg.effect_size);
      for (const auto& [chosen, vine] : effects) {
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t k = 0; k < chosen.size(); ++k) {
            const std::size_t c = chosen[k];
            pits[k] = margins[c].discrete() ? margins[c].pit(cov.x[c][i])
                                            : PitPair::continuous(cov.u[c][i]);
          }
          eta[i] += effect_expectation(vine, pits, cfg.bins);
        }
      }
      return eta;
    };
  }

  const Covariates cal = gen_covariates(cfg.calibration_size(), spec,
                                        derive_seed(cfg.seed, "calibration"));
  const double b0 = calibrate_intercept(predictor(cal), cfg.target);
  info["beta0"] = b0;
  info["calibration_size"] = cfg.calibration_size();
  const std::string text = info.dump();
  for (std::size_t r = 0; r < count; ++r) {
    Covariates cov = gen_covariates(cfg.n, spec, derive_seed(cfg.seed, "data", r));
    const std::vector<double> eta = predictor(cov);
    std::vector<double> y = draw_y(eta, b0, r);
    out.push_back({make_dataset(std::move(cov.x), std::move(y)), text, b0});
  }
  return out;
}

}  // namespace copulaboost::simgen
