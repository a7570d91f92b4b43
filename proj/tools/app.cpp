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

#include "app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "benchmark.hpp"
#include "copulaboost/boosting.hpp"
#include "copulaboost/dataset.hpp"
#include "copulaboost/errors.hpp"
#include "copulaboost/metrics.hpp"
#include "copulaboost/rng.hpp"
#include "copulaboost/simgen.hpp"
#include "json.hpp"
#include "manifest.hpp"

namespace copulaboost::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double parse_real(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("'" + std::string(s) + "' is not a number");
  }
  return v;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    std::string item(text.substr(start, end - start));
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
    start = end + 1;
  }
  return out;
}

struct FitFlags {
  int L = 3;
  std::string gamma = "1/3";
  int M = 50;
  int K = component::kDefaultBins;
  int poly_degree = 4;
  std::string families = "gaussian,clayton,gumbel";
  std::string margin_mode = "parametric";
  std::string criterion = "likelihood";
  std::uint64_t seed = 1;
  int patience = 3;

  std::map<std::string, CLI::Option*> opts;

  void add(CLI::App& app) {
    opts["L"] = app.add_option("--L", L, "covariates per component");
    opts["gamma"] = app.add_option("--gamma", gamma, "learning rate, decimal or fraction");
    opts["M"] = app.add_option("--M", M, "maximum number of components");
    app.add_option("--K", K, "quantile bins for continuous residuals");
    app.add_option("--poly-degree", poly_degree, "degree of the quantile polynomial");
    app.add_option("--families", families, "comma-separated copula families");
    app.add_option("--margin-mode", margin_mode, "parametric or rank");
    opts["criterion"] = app.add_option("--criterion", criterion, "likelihood or auc");
    opts["seed"] = app.add_option("--seed", seed, "random seed");
    app.add_option("--patience", patience, "rejected stages tolerated before stopping");
  }

  bool given(const std::string& name) const {
    const auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }

  boosting::BoostConfig config() const {
    boosting::BoostConfig c;
    c.L = L;
    c.gamma = parse_gamma(gamma);
    c.M_max = M;
    c.bins = K;
    c.poly_degree = poly_degree;
    c.families = parse_families(families);
    c.margin_mode = margins::parse_margin_mode(margin_mode);
    c.criterion = boosting::parse_criterion(criterion);
    c.seed = seed;
    c.patience = patience;
    c.validate();
    return c;
  }
};

json config_json(const boosting::BoostConfig& c, const std::string& gamma_text) {
  json fams = json::array();
  for (auto f : c.families) fams.push_back(std::string(copula::family_name(f)));
  return {{"L", c.L},
          {"gamma", gamma_text},
          {"M", c.M_max},
          {"K", c.bins},
          {"poly_degree", c.poly_degree},
          {"families", fams},
          {"margin_mode", std::string(margins::margin_mode_name(c.margin_mode))},
          {"criterion", std::string(boosting::criterion_name(c.criterion))},
          {"seed", c.seed},
          {"patience", c.patience}};
}

json report_json(const metrics::EvalReport& r) {
  return {{"loglik", r.loglik}, {"auc", r.auc}, {"accuracy", r.accuracy}, {"n", r.n}};
}

void print_report(std::ostream& out, std::string_view label, const metrics::EvalReport& r) {
  out << label << ": loglik=" << data::format_double(r.loglik)
      << " auc=" << data::format_double(r.auc)
      << " accuracy=" << data::format_double(r.accuracy) << " n=" << r.n << "\n";
}

metrics::EvalReport evaluate_model(const boosting::BoostModel& m, const data::Dataset& d) {
  return metrics::evaluate(d.y, boosting::predict(m, d));
}

// Output directory plus the manifest being assembled for it.
class Run {
 public:
  Run(std::string command, const std::vector<std::string>& args, const std::string& out_dir)
      : dir_(out_dir) {
    manifest_.command = std::move(command);
    manifest_.args = args;
    fs::create_directories(dir_);
  }

  RunManifest& manifest() { return manifest_; }

  std::string input(const std::string& path) {
    std::string text = data::read_text(path);
    manifest_.inputs[path] = sha256_hex(text);
    return text;
  }

  void write(const std::string& name, std::string_view text) {
    data::write_text((dir_ / name).string(), text);
    manifest_.outputs[name] = sha256_hex(text);
  }

  void finish() { data::write_text((dir_ / std::string(kManifestFile)).string(), manifest_.to_json()); }

 private:
  fs::path dir_;
  RunManifest manifest_;
};

data::Dataset load_dataset(Run& run, const std::string& path, const std::string& schema_path,
                           const std::string& response) {
  const data::RawTable table = data::parse_csv(run.input(path));
  const data::Schema schema = schema_path.empty()
                                  ? data::infer_schema(table, response)
                                  : data::schema_from_json(run.input(schema_path));
  return data::build_dataset(table, schema);
}

data::Schema model_schema(const boosting::BoostModel& m) {
  data::Dataset shape;
  shape.names = m.names;
  shape.types = m.types;
  shape.response = m.response;
  shape.x.resize(m.names.size());
  return data::dataset_schema(shape);
}

// The response may be absent when only predictions are wanted.
data::RawTable with_response(data::RawTable table, const std::string& response) {
  if (std::find(table.header.begin(), table.header.end(), response) != table.header.end()) return table;
  table.header.push_back(response);
  for (auto& row : table.rows) row.push_back("0");
  return table;
}

// ---- simulate ---------------------------------------------------------

struct SimulateCmd {
  simgen::SimConfig cfg;
  std::string out;

  void add(CLI::App& app) {
    app.add_option("--setting", cfg.setting, "data-generating setting 1..4")->check(CLI::Range(1, 4));
    app.add_option("--n", cfg.n, "rows per file");
    app.add_option("--p", cfg.p, "number of covariates");
    app.add_option("--discrete-frac", cfg.discrete_fraction, "fraction of binary covariates");
    app.add_option("--target", cfg.target, "P(Y = 1)");
    app.add_option("--d", cfg.d, "vine neighbours of the response (setting 2)");
    app.add_option("--effects", cfg.effects, "number of copula effects (setting 3)");
    app.add_option("--interaction", cfg.interaction, "term order (setting 4)");
    app.add_option("--tau-bound", cfg.tau_bound, "first-tree Kendall tau bound");
    app.add_option("--K", cfg.bins, "bins for effect expectations (setting 3)");
    app.add_option("--calibration", cfg.calibration, "intercept calibration sample size (0: default)");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--out", out, "output directory")->required();
  }

  int exec(const std::vector<std::string>& args, std::ostream& os) {
    Run run("simulate", args, out);
    const auto sims = simgen::simulate(cfg, 3);
    static constexpr const char* kNames[] = {"train.csv", "validation.csv", "test.csv"};
    json results = json::object();
    for (std::size_t k = 0; k < 3; ++k) {
      run.write(kNames[k], data::dataset_to_csv(sims[k].data));
      const auto& y = sims[k].data.y;
      results[kNames[k]] = {{"rows", y.size()},
                            {"ybar", std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size())}};
    }
    run.write("schema.json", data::schema_to_json(data::dataset_schema(sims[0].data)));
    const json generator = json::parse(sims[0].info);
    run.write("generator.json", generator.dump(1) + "\n");
    auto& m = run.manifest();
    m.seed = cfg.seed;
    m.config = {{"setting", cfg.setting}, {"n", cfg.n}, {"p", cfg.p},
                {"discrete_fraction", cfg.discrete_fraction}, {"target", cfg.target},
                {"d", cfg.d}, {"effects", cfg.effects}, {"interaction", cfg.interaction},
                {"tau_bound", cfg.tau_bound}, {"K", cfg.bins},
                {"calibration", cfg.calibration_size()}};
    m.generator = generator;
    m.results = results;
    run.finish();
    os << "wrote train/validation/test (" << cfg.n << " rows, " << cfg.p << " covariates) to "
       << out << "\n";
    return kOk;
  }
};

// ---- fit ------------------------------------------------------------

struct FitCmd {
  FitFlags flags;
  std::string train, validation, schema, response = "y", out;

  void add(CLI::App& app) {
    app.add_option("--train", train, "training CSV")->required();
    app.add_option("--validation", validation, "validation CSV used to choose M*");
    app.add_option("--schema", schema, "schema sidecar (inferred when absent)");
    app.add_option("--response", response, "response column when inferring the schema");
    app.add_option("--out", out, "output directory")->required();
    flags.add(app);
  }

  int exec(const std::vector<std::string>& args, std::ostream& os) {
    const boosting::BoostConfig cfg = flags.config();
    Run run("fit", args, out);
    const data::Dataset tr = load_dataset(run, train, schema, response);
    std::vector<std::string> warnings;
    boosting::BoostModel model = boosting::fit(tr, cfg, &warnings);
    model.metadata["gamma"] = flags.gamma;
    json results = {{"M", model.M()}, {"stop_reason", model.stop_reason}};
    if (!validation.empty()) {
      const data::Dataset va = load_dataset(run, validation, schema, response);
      boosting::select_M_star(model, va, cfg.criterion);
      results["M_star"] = model.M_star;
      results["validation"] = report_json(evaluate_model(model, va));
    } else {
      boosting::select_M_star(model, tr, cfg.criterion);
      results["M_star"] = model.M_star;
    }
    const metrics::EvalReport tr_report = evaluate_model(model, tr);
    results["train"] = report_json(tr_report);
    results["warnings"] = warnings;
    run.write("model.json", boosting::save_model(model));
    run.write("report.json", results.dump(1) + "\n");
    auto& m = run.manifest();
    m.seed = cfg.seed;
    m.config = config_json(cfg, flags.gamma);
    m.results = results;
    run.finish();
    os << "M=" << model.M() << " M*=" << model.M_star << " (" << model.stop_reason << ")\n";
    print_report(os, "train", tr_report);
    if (results.contains("validation")) {
      const auto& v = results["validation"];
      metrics::EvalReport r{v["loglik"], v["auc"], v["accuracy"], v["n"]};
      print_report(os, "validation", r);
    }
    return kOk;
  }
};

// ---- predict / evaluate ---------------------------------------------------

struct ModelDataCmd {
  std::string model, data, schema, out;

  void add(CLI::App& app) {
    app.add_option("--model", model, "model file")->required();
    app.add_option("--data", data, "CSV to score")->required();
    app.add_option("--schema", schema, "schema sidecar (taken from the model when absent)");
    app.add_option("--out", out, "output directory")->required();
  }

  std::pair<boosting::BoostModel, data::RawTable> load(Run& run) {
    boosting::BoostModel m = boosting::load_model(run.input(model));
    data::RawTable table = data::parse_csv(run.input(data));
    return {std::move(m), std::move(table)};
  }

  data::Dataset build(Run& run, const boosting::BoostModel& m, const data::RawTable& table) {
    const data::Schema s = schema.empty() ? model_schema(m) : data::schema_from_json(run.input(schema));
    return data::build_dataset(table, s);
  }
};

struct PredictCmd : ModelDataCmd {
  int exec(const std::vector<std::string>& args, std::ostream& os) {
    Run run("predict", args, out);
    auto [m, table] = load(run);
    const data::Dataset d = build(run, m, with_response(table, m.response));
    const std::vector<double> p = boosting::predict(m, d);
    std::string csv;
    for (std::size_t j = 0; j < table.header.size(); ++j) csv += data::csv_field(table.header[j]) + ',';
    csv += "probability\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      for (const auto& f : table.rows[i]) csv += data::csv_field(f) + ',';
      csv += data::format_double(p[i]) + '\n';
    }
    run.write("predictions.csv", csv);
    run.manifest().config = {{"M_star", m.M_star}};
    run.manifest().seed = m.config.seed;
    run.manifest().results = {{"rows", p.size()}};
    run.finish();
    os << "wrote " << p.size() << " predictions to " << (fs::path(out) / "predictions.csv").string() << "\n";
    return kOk;
  }
};

struct EvaluateCmd : ModelDataCmd {
  int exec(const std::vector<std::string>& args, std::ostream& os) {
    Run run("evaluate", args, out);
    auto [m, table] = load(run);
    const data::Dataset d = build(run, m, table);
    const metrics::EvalReport r = evaluate_model(m, d);
    const json results = {{"M_star", m.M_star}, {"report", report_json(r)}};
    run.write("report.json", results.dump(1) + "\n");
    run.manifest().config = {{"M_star", m.M_star}};
    run.manifest().seed = m.config.seed;
    run.manifest().results = results;
    run.finish();
    print_report(os, "evaluation", r);
    return kOk;
  }
};

// ---- benchmark ----------------------------------------------------------

std::string setting_label(int s) {
  static constexpr const char* kWords[] = {"one", "two", "three", "four"};
  return std::string("Setting ") + kWords[s - 1];
}

struct BenchmarkCmd {
  FitFlags flags;
  std::string suite, data_dir = "data", out, Ls = "1,2,3,4,5,6", gammas = "1/3,2/3,1";
  std::size_t replicates = 0;
  int setting = 3;
  std::size_t n = 500, p = 100, calibration = 0;
  double discrete_frac = 0.25;

  void add(CLI::App& app) {
    app.add_option("--suite", suite, "margins-figure3, grid-tables12, wdbc or boston")
        ->required()
        ->check(CLI::IsMember({"margins-figure3", "grid-tables12", "wdbc", "boston"}));
    app.add_option("--data-dir", data_dir, "directory holding wdbc.csv and boston.csv");
    app.add_option("--replicates", replicates, "replicates or split seeds (suite default when 0)");
    app.add_option("--setting", setting, "simulation setting for grid-tables12")->check(CLI::Range(1, 4));
    app.add_option("--n", n, "rows per simulated dataset");
    app.add_option("--p", p, "simulated covariates");
    app.add_option("--discrete-frac", discrete_frac, "fraction of binary simulated covariates");
    app.add_option("--calibration", calibration, "intercept calibration sample size (0: default)");
    app.add_option("--Ls", Ls, "component sizes for grid-tables12");
    app.add_option("--gammas", gammas, "learning rates for grid-tables12");
    app.add_option("--out", out, "output directory")->required();
    flags.add(app);
  }

  simgen::SimConfig sim_config(std::uint64_t seed) const {
    simgen::SimConfig c;
    c.setting = setting;
    c.n = n;
    c.p = p;
    c.discrete_fraction = discrete_frac;
    c.calibration = calibration;
    c.seed = seed;
    return c;
  }

  int exec(const std::vector<std::string>& args, std::ostream& os) {
    Run run("benchmark", args, out);
    run.manifest().seed = flags.seed;
    if (suite == "wdbc" || suite == "boston") {
      real_data(run, os);
    } else if (suite == "grid-tables12") {
      grid(run, os);
    } else {
      margins_figure(run, os);
    }
    run.finish();
    return kOk;
  }

  void real_data(Run& run, std::ostream& os) {
    const bool wdbc = suite == "wdbc";
    if (!flags.given("L")) flags.L = wdbc ? 3 : 5;
    const boosting::BoostConfig base = flags.config();
    const std::string path = (fs::path(data_dir) / (wdbc ? "wdbc.csv" : "boston.csv")).string();
    if (!fs::exists(path)) throw DataError("dataset '" + path + "' not found");
    run.input(path);
    const data::Dataset full = wdbc ? bench::load_wdbc(path) : bench::load_boston(path);
    const std::size_t n_train = wdbc ? bench::kWdbcTrain : bench::kBostonTrain;
    const std::size_t reps = replicates ? replicates : 5;
    std::vector<double> cols[6];
    std::string runs = "replicate,seed,M,M_star,train_loglik,test_loglik,train_auc,test_auc,train_accuracy,test_accuracy\n";
    for (std::size_t r = 0; r < reps; ++r) {
      boosting::BoostConfig cfg = base;
      cfg.seed = base.seed + r;
      const bench::HoldoutResult h = bench::run_holdout(full, n_train, cfg, cfg.seed);
      const double v[6] = {h.train.loglik, h.test.loglik, h.train.auc, h.test.auc,
                           h.train.accuracy, h.test.accuracy};
      runs += std::to_string(r) + ',' + std::to_string(cfg.seed) + ',' + std::to_string(h.M) + ',' +
              std::to_string(h.M_star);
      for (int k = 0; k < 6; ++k) {
        cols[k].push_back(v[k]);
        runs += ',' + data::format_double(v[k]);
      }
      runs += '\n';
      os << "seed " << cfg.seed << ": test auc=" << h.test.auc << " accuracy=" << h.test.accuracy << "\n";
    }
    static constexpr const char* kMeasures[] = {"likelihood", "AUC", "accuracy"};
    std::string table = "measure,set,copulaboost\n";
    json results = json::object();
    for (int k = 0; k < 6; ++k) {
      const char* set = k % 2 == 0 ? "Training" : "Test";
      table += std::string(kMeasures[k / 2]) + ',' + set + ",\"" + bench::mean_sd_cell(cols[k], 4) + "\"\n";
      results[std::string(kMeasures[k / 2]) + "_" + set] = {{"mean", bench::summarize(cols[k]).mean},
                                                            {"median", bench::median(cols[k])}};
    }
    run.write("table.csv", table);
    run.write("runs.csv", runs);
    run.manifest().config = config_json(base, flags.gamma);
    run.manifest().config["replicates"] = reps;
    run.manifest().config["n_train"] = n_train;
    run.manifest().results = results;
    os << table;
  }

  void grid(Run& run, std::ostream& os) {
    std::vector<int> sizes;
    for (const auto& s : split_list(Ls)) sizes.push_back(static_cast<int>(parse_real(s)));
    const std::vector<std::string> rates = split_list(gammas);
    if (sizes.empty() || rates.empty()) throw std::invalid_argument("empty component size or learning rate list");
    const std::size_t reps = replicates ? replicates : 5;
    // cell[(rate, size)] -> per-replicate values
    std::map<std::pair<std::size_t, std::size_t>, std::vector<bench::GridResult>> cells;
    std::string runs = "replicate,gamma,L,M,M_star_loglik,M_star_auc,test_loglik,test_auc\n";
    for (std::size_t r = 0; r < reps; ++r) {
      const auto sims = simgen::simulate(sim_config(derive_seed(flags.seed, "simulation", r)), 3);
      const std::vector<data::Dataset> sets = {sims[0].data, sims[1].data, sims[2].data};
      for (std::size_t gi = 0; gi < rates.size(); ++gi) {
        for (std::size_t li = 0; li < sizes.size(); ++li) {
          FitFlags f = flags;
          f.L = sizes[li];
          f.gamma = rates[gi];
          if (!flags.given("M")) f.M = bench::default_grid_budget(f.L);
          boosting::BoostConfig cfg = f.config();
          cfg.seed = derive_seed(flags.seed, "fit", r);
          const bench::GridResult g = bench::run_grid_replicate(sets, cfg);
          cells[{gi, li}].push_back(g);
          runs += std::to_string(r) + ',' + rates[gi] + ',' + std::to_string(f.L) + ',' +
                  std::to_string(g.M) + ',' + std::to_string(g.M_star_loglik) + ',' +
                  std::to_string(g.M_star_auc) + ',' + data::format_double(g.test_loglik) + ',' +
                  data::format_double(g.test_auc) + '\n';
          os << "replicate " << r << " gamma " << rates[gi] << " L " << f.L << ": test auc "
             << g.test_auc << " M* " << g.M_star_auc << "\n";
        }
      }
    }
    auto header = [&] {
      std::string h = "Learning rate";
      for (int L : sizes) h += ',' + std::to_string(L) + (L == 1 ? " Covariate" : " Covariates");
      return h + '\n';
    };
    auto block = [&](const std::string& title, auto value, int decimals) {
      std::string b = title + std::string(sizes.size(), ',') + '\n';
      for (std::size_t gi = 0; gi < rates.size(); ++gi) {
        b += rates[gi];
        for (std::size_t li = 0; li < sizes.size(); ++li) {
          std::vector<double> v;
          for (const auto& g : cells[{gi, li}]) v.push_back(value(g));
          b += ",\"" + bench::mean_sd_cell(v, decimals) + '"';
        }
        b += '\n';
      }
      return b;
    };
    const std::string t1 = header() + block(setting_label(setting), [](const bench::GridResult& g) { return g.test_loglik; }, 2);
    const std::string t2 = header() + block(setting_label(setting), [](const bench::GridResult& g) { return g.test_auc; }, 4);
    const std::string t3 = header() +
                           block("Likelihood", [](const bench::GridResult& g) { return double(g.M_star_loglik); }, 2) +
                           block("AUC", [](const bench::GridResult& g) { return double(g.M_star_auc); }, 2);
    run.write("table1_likelihood.csv", t1);
    run.write("table2_auc.csv", t2);
    run.write("table3_components.csv", t3);
    run.write("runs.csv", runs);
    json results = json::object();
    for (std::size_t gi = 0; gi < rates.size(); ++gi) {
      for (std::size_t li = 0; li < sizes.size(); ++li) {
        std::vector<double> a;
        for (const auto& g : cells[{gi, li}]) a.push_back(g.test_auc);
        results["gamma=" + rates[gi] + ",L=" + std::to_string(sizes[li])] = {{"mean_test_auc", bench::summarize(a).mean}};
      }
    }
    auto& m = run.manifest();
    m.config = config_json(flags.config(), flags.gamma);
    m.config["setting"] = setting;
    m.config["Ls"] = sizes;
    m.config["gammas"] = rates;
    m.config["replicates"] = reps;
    m.config["n"] = n;
    m.config["p"] = p;
    m.results = results;
    os << t2;
  }

  void margins_figure(Run& run, std::ostream& os) {
    if (!flags.given("L")) flags.L = 4;
    if (!flags.given("gamma")) flags.gamma = "1";
    const boosting::BoostConfig base = flags.config();
    const std::size_t reps = replicates ? replicates : 10;
    const margins::MarginMode modes[] = {margins::MarginMode::Parametric, margins::MarginMode::Rank};
    // curves[mode][series][replicate][prefix]
    std::vector<std::vector<double>> curves[2][4];
    std::string runs = "replicate,margins,M,train_loglik,test_loglik,train_auc,test_auc\n";
    for (std::size_t r = 0; r < reps; ++r) {
      simgen::SimConfig sc = sim_config(derive_seed(flags.seed, "simulation", r));
      sc.setting = 3;
      const auto sims = simgen::simulate(sc, 2);
      for (int k = 0; k < 2; ++k) {
        boosting::BoostConfig cfg = base;
        cfg.margin_mode = modes[k];
        cfg.seed = derive_seed(flags.seed, "fit", r);
        const boosting::BoostModel model = boosting::fit(sims[0].data, cfg);
        const bench::Curves c = bench::prefix_curves(model, sims[0].data, sims[1].data);
        const std::vector<double>* series[4] = {&c.train_loglik, &c.test_loglik, &c.train_auc, &c.test_auc};
        runs += std::to_string(r) + ',' + std::string(margins::margin_mode_name(modes[k])) + ',' +
                std::to_string(model.M());
        for (int s = 0; s < 4; ++s) {
          curves[k][s].push_back(*series[s]);
          runs += ',' + data::format_double(series[s]->back());
        }
        runs += '\n';
        os << "replicate " << r << " " << margins::margin_mode_name(modes[k]) << ": M " << model.M()
           << " test auc " << c.test_auc.back() << "\n";
      }
    }
    // Fits may stop before M; a stopped curve is carried forward at its last value.
    const std::size_t width = static_cast<std::size_t>(base.M_max) + 1;
    static constexpr const char* kSeries[] = {"train_loglik", "test_loglik", "train_auc", "test_auc"};
    std::string table = "M";
    for (int k = 0; k < 2; ++k) {
      for (const char* s : kSeries) {
        const std::string name = std::string(margins::margin_mode_name(modes[k])) + "_" + s;
        table += ',' + name + "_mean," + name + "_p10," + name + "_p90";
      }
    }
    table += '\n';
    json results = json::object();
    for (std::size_t mm = 0; mm < width; ++mm) {
      table += std::to_string(mm);
      for (int k = 0; k < 2; ++k) {
        for (int s = 0; s < 4; ++s) {
          std::vector<double> v;
          for (const auto& c : curves[k][s]) v.push_back(c[std::min(mm, c.size() - 1)]);
          table += ',' + data::format_double(bench::summarize(v).mean) + ',' +
                   data::format_double(bench::percentile(v, 0.1)) + ',' +
                   data::format_double(bench::percentile(v, 0.9));
          if (mm + 1 == width) {
            results[std::string(margins::margin_mode_name(modes[k])) + "_" + kSeries[s]] = bench::summarize(v).mean;
          }
        }
      }
      table += '\n';
    }
    run.write("figure3_curves.csv", table);
    run.write("runs.csv", runs);
    auto& m = run.manifest();
    m.config = config_json(base, flags.gamma);
    m.config["replicates"] = reps;
    m.config["n"] = n;
    m.config["p"] = p;
    m.results = results;
    os << results.dump(1) << "\n";
  }
};

// ---- replay -------------------------------------------------------------

struct ReplayCmd {
  std::string manifest, out;

  void add(CLI::App& app) {
    app.add_option("--manifest", manifest, "manifest written by an earlier run")->required();
    app.add_option("--out", out, "directory for the replayed outputs")->required();
  }

  int exec(std::ostream& os, std::ostream& err) {
    const RunManifest m = RunManifest::from_json(data::read_text(manifest));
    if (m.command == "replay") throw DataError("cannot replay a replay");
    for (const auto& [path, digest] : m.inputs) {
      if (file_sha256(path) != digest) throw DataError("input '" + path + "' changed since the recorded run");
    }
    std::vector<std::string> args = m.args;
    const auto it = std::find(args.begin(), args.end(), "--out");
    if (it == args.end() || std::next(it) == args.end()) throw DataError("manifest arguments lack --out");
    *std::next(it) = out;
    std::ostringstream sink;
    const int code = run(args, sink, err);
    if (code != kOk) return code;
    std::vector<std::string> differ;
    for (const auto& [name, digest] : m.outputs) {
      const fs::path p = fs::path(out) / name;
      if (!fs::exists(p) || file_sha256(p.string()) != digest) differ.push_back(name);
    }
    if (!differ.empty()) {
      std::string msg = "replay differs in:";
      for (const auto& d : differ) msg += " " + d;
      throw DataError(msg);
    }
    os << "replayed " << m.command << ": " << m.outputs.size() << " outputs identical\n";
    return kOk;
  }
};

}  // namespace

double parse_gamma(std::string_view text) {
  const auto slash = text.find('/');
  double v = 0.0;
  if (slash == std::string_view::npos) {
    v = parse_real(text);
  } else {
    const double den = parse_real(text.substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument("learning rate has a zero denominator");
    v = parse_real(text.substr(0, slash)) / den;
  }
  if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("learning rate must lie in (0, 1]");
  return v;
}

std::vector<copula::Family> parse_families(std::string_view text) {
  std::vector<copula::Family> out;
  for (const auto& name : split_list(text)) {
    const copula::Family f = copula::parse_family(name);
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  if (out.empty()) throw std::invalid_argument("no copula families given");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"copulaboost: boosted copula-based additive models for binary outcomes"};
  app.require_subcommand(1);
  SimulateCmd simulate;
  FitCmd fit;
  PredictCmd predict;
  EvaluateCmd evaluate;
  BenchmarkCmd benchmark;
  ReplayCmd replay;
  CLI::App* sim_app = app.add_subcommand("simulate", "draw train/validation/test datasets");
  CLI::App* fit_app = app.add_subcommand("fit", "fit a model and choose M*");
  CLI::App* pred_app = app.add_subcommand("predict", "append predicted probabilities to a CSV");
  CLI::App* eval_app = app.add_subcommand("evaluate", "log-likelihood, AUC and accuracy of a model");
  CLI::App* bench_app = app.add_subcommand("benchmark", "run an experiment suite");
  CLI::App* replay_app = app.add_subcommand("replay", "rerun a manifest and compare outputs");
  simulate.add(*sim_app);
  fit.add(*fit_app);
  predict.add(*pred_app);
  evaluate.add(*eval_app);
  benchmark.add(*bench_app);
  replay.add(*replay_app);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*sim_app) return simulate.exec(args, out);
    if (*fit_app) return fit.exec(args, out);
    if (*pred_app) return predict.exec(args, out);
    if (*eval_app) return evaluate.exec(args, out);
    if (*bench_app) return benchmark.exec(args, out);
    return replay.exec(out, err);
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace copulaboost::cli
