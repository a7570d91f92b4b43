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

#include "copulaboost/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "json.hpp"

#include "copulaboost/errors.hpp"
#include "copulaboost/greedy.hpp"
#include "copulaboost/metrics.hpp"
#include "copulaboost/rng.hpp"

namespace copulaboost::boosting {

namespace {

using nlohmann::json;

// Selection scores and margins depend only on the raw columns (and, for
// discrete columns, the stage's jitter draw), so they are computed lazily.
class ColumnCache {
 public:
  ColumnCache(const data::Dataset& d, margins::MarginMode mode) : d_(d), mode_(mode) {
    margins_.resize(d.cols());
    continuous_scores_.resize(d.cols());
  }

  const std::optional<margins::MarginalModel>& margin(std::size_t c) {
    if (!margins_[c]) {
      try {
        margins_[c] = margins::fit_margin(d_.x[c], d_.types[c], mode_);
      } catch (const DataError&) {
        margins_[c] = std::optional<margins::MarginalModel>{};
        unusable_.push_back(c);
      }
    }
    return *margins_[c];
  }

  bool usable(std::size_t c) {
    margin(c);
    return std::find(unusable_.begin(), unusable_.end(), c) == unusable_.end();
  }

  std::vector<std::vector<double>> stage_scores(std::uint64_t seed, int stage) {
    std::vector<std::vector<double>> out(d_.cols());
    for (std::size_t c = 0; c < d_.cols(); ++c) {
      if (!usable(c)) continue;
      if (d_.types[c] == margins::VarType::Continuous) {
        if (!continuous_scores_[c]) continuous_scores_[c] = greedy::normal_scores(d_.x[c]);
        out[c] = *continuous_scores_[c];
        continue;
      }
      const std::uint64_t s =
          derive_seed(seed, "selection-jitter", static_cast<std::uint64_t>(stage) * d_.cols() + c);
      out[c] = greedy::normal_scores(greedy::jitter(d_.x[c], d_.types[c], s));
    }
    return out;
  }

 private:
  const data::Dataset& d_;
  margins::MarginMode mode_;
  std::vector<std::optional<std::optional<margins::MarginalModel>>> margins_;
  std::vector<std::optional<std::vector<double>>> continuous_scores_;
  std::vector<std::size_t> unusable_;
};

double criterion_value(Criterion c, std::span<const double> y, std::span<const double> h) {
  return c == Criterion::Likelihood ? metrics::log_likelihood_scores(y, h) : metrics::auc(y, h);
}

json margin_to_json(const margins::MarginalModel& m) {
  json j = {{"kind", std::string(margins::margin_kind_name(m.kind()))}};
  switch (m.kind()) {
    case margins::MarginKind::Gaussian:
      j["mu"] = m.mu();
      j["sigma"] = m.sigma();
      break;
    case margins::MarginKind::Bernoulli:
      j["p"] = m.p();
      j["lo"] = m.lo();
      j["hi"] = m.hi();
      break;
    case margins::MarginKind::Ordinal:
      j["support"] = m.support();
      j["probs"] = m.probs();
      break;
    case margins::MarginKind::Rank:
      j["continuous"] = m.rank_continuous();
      j["sample"] = m.sample();
      break;
  }
  return j;
}

margins::MarginalModel margin_from_json(const json& j) {
  switch (margins::parse_margin_kind(j.at("kind").get<std::string>())) {
    case margins::MarginKind::Gaussian:
      return margins::MarginalModel::gaussian(j.at("mu"), j.at("sigma"));
    case margins::MarginKind::Bernoulli:
      return margins::MarginalModel::bernoulli(j.at("p"), j.at("lo"), j.at("hi"));
    case margins::MarginKind::Ordinal:
      return margins::MarginalModel::ordinal(j.at("support"), j.at("probs"));
    case margins::MarginKind::Rank:
      return margins::MarginalModel::rank(j.at("sample"), j.at("continuous"));
  }
  throw DataError("unknown margin kind");
}

json component_to_json(const component::Component& c) {
  json pairs = json::array();
  for (const auto& tree : c.vine.pairs) {
    json t = json::array();
    for (const auto& e : tree) {
      t.push_back({{"family", std::string(copula::family_name(e.family()))},
                   {"parameter", e.parameter()},
                   {"rotation", e.rotation()}});
    }
    pairs.push_back(std::move(t));
  }
  json ms = json::array();
  for (const auto& m : c.vine.margins) ms.push_back(margin_to_json(m));
  json j = {{"subset", c.subset},
            {"gamma", c.gamma},
            {"mode", c.mode == component::Mode::Discrete ? "discrete" : "binned"},
            {"margins", ms},
            {"vine", {{"order", c.subset}, {"pairs", pairs}}}};
  if (c.mode == component::Mode::Discrete) {
    j["atoms"] = c.atoms;
  } else {
    j["grid"] = {{"edges", c.edges}, {"reps", c.reps}};
  }
  return j;
}

component::Component component_from_json(const json& j) {
  component::Component c;
  c.subset = j.at("subset").get<std::vector<std::size_t>>();
  c.gamma = j.at("gamma");
  const std::string mode = j.at("mode");
  if (mode == "discrete") {
    c.mode = component::Mode::Discrete;
    c.atoms = j.at("atoms").get<std::vector<double>>();
  } else if (mode == "binned") {
    c.mode = component::Mode::Binned;
    c.edges = j.at("grid").at("edges").get<std::vector<double>>();
    c.reps = j.at("grid").at("reps").get<std::vector<double>>();
  } else {
    throw DataError("unknown component mode '" + mode + "'");
  }
  for (const auto& m : j.at("margins")) c.vine.margins.push_back(margin_from_json(m));
  for (const auto& t : j.at("vine").at("pairs")) {
    std::vector<copula::BivariateCopula> tree;
    for (const auto& e : t) {
      tree.emplace_back(copula::parse_family(e.at("family").get<std::string>()),
                        e.at("parameter").get<double>(), e.at("rotation").get<int>());
    }
    c.vine.pairs.push_back(std::move(tree));
  }
  if (c.vine.margins.size() != c.subset.size() + 1 || c.vine.pairs.size() != c.subset.size()) {
    throw DataError("component vine does not match its subset");
  }
  return c;
}

}  // namespace

std::string_view criterion_name(Criterion c) {
  return c == Criterion::Likelihood ? "likelihood" : "auc";
}

Criterion parse_criterion(std::string_view s) {
  if (s == "likelihood") return Criterion::Likelihood;
  if (s == "auc") return Criterion::Auc;
  throw std::invalid_argument("unknown criterion '" + std::string(s) + "'");
}

void BoostConfig::validate() const {
  if (L < 1 || L > 6) throw std::invalid_argument("L must lie in 1..6");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (M_max < 0) throw std::invalid_argument("M must be non-negative");
  if (poly_degree < 1 || poly_degree > 8) throw std::invalid_argument("poly degree must lie in 1..8");
  if (bins < 2) throw std::invalid_argument("K must be at least 2");
  if (families.empty()) throw std::invalid_argument("family list is empty");
  if (patience < 1) throw std::invalid_argument("patience must be positive");
}

double init_intercept(std::span<const double> y) {
  if (y.empty()) throw DataError("empty response");
  double s = 0.0;
  for (double v : y) s += v;
  const double ybar = s / static_cast<double>(y.size());
  if (!(ybar > 0.0 && ybar < 1.0)) throw DataError("response has a single class");
  return std::log(ybar / (1.0 - ybar));
}

std::vector<double> pseudo_residuals(std::span<const double> y,
                                     std::span<const double> h) {
  if (y.size() != h.size()) throw std::invalid_argument("length mismatch");
  std::vector<double> r(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) r[i] = y[i] - metrics::logistic(h[i]);
  return r;
}

BoostModel fit(const data::Dataset& train, const BoostConfig& config,
               std::vector<std::string>* warnings) {
  config.validate();
  if (train.x.size() != train.names.size() || train.types.size() != train.names.size()) {
    throw DataError("dataset columns, names and types disagree");
  }
  for (const auto& col : train.x) {
    if (col.size() != train.rows()) throw DataError("ragged dataset");
  }
  BoostModel model;
  model.names = train.names;
  model.types = train.types;
  model.response = train.response;
  model.config = config;
  model.h0 = init_intercept(train.y);

  const std::size_t n = train.rows();
  std::vector<double> h(n, model.h0);
  double current = metrics::log_likelihood_scores(train.y, h);
  model.train_loglik.push_back(current);

  ColumnCache cache(train, config.margin_mode);
  component::ComponentOptions copts;
  copts.bins = config.bins;
  copts.margin_mode = config.margin_mode;
  copts.families = config.families;
  copts.gamma = config.gamma;
  const greedy::GreedyOptions gopts{config.L, config.gamma, config.poly_degree,
                                    component::kDiscreteResidualLimit};

  int misses = 0;
  int stage = 0;
  model.stop_reason = "reached M";
  while (model.components.size() < static_cast<std::size_t>(config.M_max)) {
    ++stage;
    const std::vector<double> res = pseudo_residuals(train.y, h);
    const greedy::GreedyResult g =
        greedy::greedy_select(res, train.y, h, cache.stage_scores(config.seed, stage), gopts);
    std::string miss;
    if (g.subset.empty()) {
      miss = "no covariate improves the training likelihood";
    } else {
      std::vector<std::vector<double>> cols;
      std::vector<margins::MarginalModel> ms;
      for (std::size_t c : g.subset) {
        cols.push_back(train.x[c]);
        ms.push_back(*cache.margin(c));
      }
      component::Component comp =
          component::fit_component(res, cols, std::move(ms), g.subset, copts, warnings);
      const std::vector<double> add = component::evaluate_rows(comp, train.x);
      std::vector<double> next(n);
      for (std::size_t i = 0; i < n; ++i) next[i] = h[i] + add[i];
      const double ll = metrics::log_likelihood_scores(train.y, next);
      if (ll > current) {
        h = std::move(next);
        current = ll;
        model.components.push_back(std::move(comp));
        model.train_loglik.push_back(current);
        misses = 0;
        continue;
      }
      miss = "fitted component did not improve the training likelihood";
    }
    if (warnings) warnings->push_back("stage " + std::to_string(stage) + ": " + miss);
    if (++misses >= config.patience) {
      model.stop_reason = miss + " for " + std::to_string(misses) + " consecutive stages";
      break;
    }
  }
  model.M_star = model.components.size();
  return model;
}

void check_schema(const BoostModel& model, const data::Dataset& d) {
  std::string msg;
  for (const auto& name : model.names) {
    if (std::find(d.names.begin(), d.names.end(), name) == d.names.end()) {
      msg += " missing '" + name + "'";
    }
  }
  for (const auto& name : d.names) {
    if (std::find(model.names.begin(), model.names.end(), name) == model.names.end()) {
      msg += " unexpected '" + name + "'";
    }
  }
  if (msg.empty() && d.names != model.names) msg = " covariates are in a different order";
  if (msg.empty() && d.types != model.types) msg = " column types differ from the model";
  if (!msg.empty()) throw DataError("schema mismatch:" + msg);
}

std::vector<std::vector<double>> contributions(const BoostModel& model,
                                               const data::Dataset& d) {
  check_schema(model, d);
  std::vector<std::vector<double>> out;
  out.reserve(model.M());
  for (const auto& c : model.components) out.push_back(component::evaluate_rows(c, d.x));
  return out;
}

std::vector<double> prefix_curve(const BoostModel& model, const data::Dataset& d,
                                 Criterion criterion) {
  const auto add = contributions(model, d);
  std::vector<double> h(d.rows(), model.h0);
  std::vector<double> curve{criterion_value(criterion, d.y, h)};
  for (const auto& a : add) {
    for (std::size_t i = 0; i < h.size(); ++i) h[i] += a[i];
    curve.push_back(criterion_value(criterion, d.y, h));
  }
  return curve;
}

std::size_t select_M_star(BoostModel& model, const data::Dataset& validation,
                          Criterion criterion) {
  const std::vector<double> curve = prefix_curve(model, validation, criterion);
  model.M_star = static_cast<std::size_t>(std::max_element(curve.begin(), curve.end()) - curve.begin());
  return model.M_star;
}

std::vector<double> decision_function(const BoostModel& model,
                                      const data::Dataset& d,
                                      std::size_t prefix) {
  check_schema(model, d);
  if (prefix > model.M()) throw std::invalid_argument("prefix exceeds the component count");
  std::vector<double> h(d.rows(), model.h0);
  for (std::size_t m = 0; m < prefix; ++m) {
    const auto a = component::evaluate_rows(model.components[m], d.x);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] += a[i];
  }
  return h;
}

std::vector<double> predict(const BoostModel& model, const data::Dataset& d) {
  std::vector<double> p = decision_function(model, d, model.M_star);
  for (double& v : p) v = metrics::logistic(v);
  return p;
}

std::string save_model(const BoostModel& model) {
  json types = json::array();
  for (auto t : model.types) types.push_back(std::string(margins::var_type_name(t)));
  json families = json::array();
  for (auto f : model.config.families) families.push_back(std::string(copula::family_name(f)));
  json comps = json::array();
  for (const auto& c : model.components) comps.push_back(component_to_json(c));
  json meta = json::object();
  for (const auto& [k, v] : model.metadata) meta[k] = v;
  const auto& cfg = model.config;
  const json j = {
      {"format", std::string(kModelFormat)},
      {"schema", {{"covariates", model.names}, {"types", types}, {"response", model.response}}},
      {"config",
       {{"L", cfg.L},
        {"gamma", cfg.gamma},
        {"M_max", cfg.M_max},
        {"poly_degree", cfg.poly_degree},
        {"K", cfg.bins},
        {"families", families},
        {"margin_mode", std::string(margins::margin_mode_name(cfg.margin_mode))},
        {"criterion", std::string(criterion_name(cfg.criterion))},
        {"seed", cfg.seed},
        {"patience", cfg.patience}}},
      {"h0", model.h0},
      {"M", model.M()},
      {"M_star", model.M_star},
      {"train_loglik", model.train_loglik},
      {"stop_reason", model.stop_reason},
      {"metadata", meta},
      {"components", comps}};
  return j.dump(1) + "\n";
}

BoostModel load_model(std::string_view text) {
  BoostModel m;
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != kModelFormat) throw DataError("not a copulaboost model file");
    const json& s = j.at("schema");
    m.names = s.at("covariates").get<std::vector<std::string>>();
    for (const auto& t : s.at("types")) m.types.push_back(margins::parse_var_type(t.get<std::string>()));
    m.response = s.at("response");
    const json& c = j.at("config");
    m.config.L = c.at("L");
    m.config.gamma = c.at("gamma");
    m.config.M_max = c.at("M_max");
    m.config.poly_degree = c.at("poly_degree");
    m.config.bins = c.at("K");
    m.config.families.clear();
    for (const auto& f : c.at("families")) m.config.families.push_back(copula::parse_family(f.get<std::string>()));
    m.config.margin_mode = margins::parse_margin_mode(c.at("margin_mode").get<std::string>());
    m.config.criterion = parse_criterion(c.at("criterion").get<std::string>());
    m.config.seed = c.at("seed");
    m.config.patience = c.at("patience");
    m.h0 = j.at("h0");
    for (const auto& comp : j.at("components")) m.components.push_back(component_from_json(comp));
    if (j.at("M").get<std::size_t>() != m.M()) throw DataError("component count mismatch");
    m.M_star = j.at("M_star");
    if (m.M_star > m.M()) throw DataError("M_star exceeds the component count");
    m.train_loglik = j.at("train_loglik").get<std::vector<double>>();
    m.stop_reason = j.at("stop_reason");
    for (const auto& [k, v] : j.at("metadata").items()) m.metadata[k] = v.get<std::string>();
    if (m.types.size() != m.names.size()) throw DataError("schema types do not match covariates");
    for (const auto& comp : m.components) {
      for (std::size_t id : comp.subset) {
        if (id >= m.names.size()) throw DataError("component references an unknown column");
      }
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid model file: ") + e.what());
  }
  return m;
}

}  // namespace copulaboost::boosting
