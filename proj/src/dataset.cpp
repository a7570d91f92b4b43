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

#include "copulaboost/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "copulaboost/errors.hpp"

namespace copulaboost::data {

namespace {

using nlohmann::json;

bool parse_number(std::string_view s, double& out) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

std::string_view role_name(Role r) {
  switch (r) {
    case Role::Response: return "response";
    case Role::Covariate: return "covariate";
    case Role::Ignore: return "ignore";
  }
  return "?";
}

Role parse_role(std::string_view s) {
  if (s == "response") return Role::Response;
  if (s == "covariate") return Role::Covariate;
  if (s == "ignore") return Role::Ignore;
  throw DataError("unknown column role '" + std::string(s) + "'");
}

std::string_view column_type_name(ColumnType t) {
  switch (t) {
    case ColumnType::Continuous: return "continuous";
    case ColumnType::Binary: return "binary";
    case ColumnType::Ordinal: return "ordinal";
    case ColumnType::Categorical: return "categorical";
  }
  return "?";
}

ColumnType parse_column_type(std::string_view s) {
  if (s == "continuous") return ColumnType::Continuous;
  if (s == "binary") return ColumnType::Binary;
  if (s == "ordinal") return ColumnType::Ordinal;
  if (s == "categorical") return ColumnType::Categorical;
  throw DataError("unknown column type '" + std::string(s) + "'");
}

margins::VarType to_var_type(ColumnType t) {
  switch (t) {
    case ColumnType::Continuous: return margins::VarType::Continuous;
    case ColumnType::Binary: return margins::VarType::Binary;
    case ColumnType::Ordinal:
    case ColumnType::Categorical: return margins::VarType::Ordinal;
  }
  return margins::VarType::Continuous;
}

void Schema::validate() const {
  std::size_t responses = 0;
  std::set<std::string> seen;
  for (const auto& c : columns) {
    if (!seen.insert(c.name).second) throw DataError("duplicate column '" + c.name + "'");
    if (c.role != Role::Response) continue;
    ++responses;
    if (c.type != ColumnType::Binary) {
      throw DataError("response column '" + c.name + "' must be binary");
    }
  }
  if (responses != 1) throw DataError("schema must declare exactly one response column");
}

std::size_t Schema::response_index() const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].role == Role::Response) return j;
  }
  throw DataError("schema has no response column");
}

std::vector<std::size_t> Schema::covariate_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].role == Role::Covariate) out.push_back(j);
  }
  return out;
}

const ColumnSpec* Schema::find(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string schema_to_json(const Schema& s) {
  json cols = json::array();
  for (const auto& c : s.columns) {
    json j = {{"name", c.name},
              {"role", std::string(role_name(c.role))},
              {"type", std::string(column_type_name(c.type))}};
    if (!c.levels.empty()) j["levels"] = c.levels;
    cols.push_back(std::move(j));
  }
  return json{{"format", "copulaboost-schema/1"}, {"columns", cols}}.dump(2) + "\n";
}

Schema schema_from_json(std::string_view text) {
  Schema s;
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "copulaboost-schema/1") {
      throw DataError("unrecognised schema format");
    }
    for (const auto& c : j.at("columns")) {
      ColumnSpec spec;
      spec.name = c.at("name").get<std::string>();
      spec.role = parse_role(c.value("role", "covariate"));
      spec.type = parse_column_type(c.at("type").get<std::string>());
      if (c.contains("levels")) spec.levels = c["levels"].get<std::vector<std::string>>();
      s.columns.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed schema: ") + e.what());
  }
  s.validate();
  return s;
}

RawTable parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      record.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw DataError("unterminated quoted CSV field");
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  if (records.empty()) throw DataError("empty CSV input");
  RawTable t;
  t.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.header.size()) {
      throw DataError("CSV row " + std::to_string(r + 1) + " has " +
                      std::to_string(records[r].size()) + " fields, expected " +
                      std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(records[r]));
  }
  return t;
}

RawTable read_csv(const std::string& path) { return parse_csv(read_text(path)); }

Schema infer_schema(const RawTable& table, std::string_view response) {
  Schema s;
  bool found = false;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    ColumnSpec spec;
    spec.name = table.header[j];
    bool numeric = true;
    std::set<double> values;
    std::set<std::string> text_levels;
    for (const auto& row : table.rows) {
      double v = 0.0;
      if (numeric && parse_number(row[j], v)) {
        values.insert(v);
      } else {
        numeric = false;
      }
      text_levels.insert(row[j]);
    }
    if (!numeric) {
      spec.type = text_levels.size() == 2 ? ColumnType::Binary : ColumnType::Categorical;
      spec.levels.assign(text_levels.begin(), text_levels.end());
    } else if (table.rows.size() >= kInferMinRows && values.size() <= kInferMaxLevels) {
      spec.type = values.size() == 2 ? ColumnType::Binary : ColumnType::Ordinal;
    }
    if (spec.name == response) {
      spec.role = Role::Response;
      spec.type = ColumnType::Binary;
      found = true;
    }
    s.columns.push_back(std::move(spec));
  }
  if (!found) throw DataError("response column '" + std::string(response) + "' not in CSV header");
  s.validate();
  return s;
}

Dataset Dataset::select_rows(std::span<const std::size_t> index) const {
  Dataset d;
  d.names = names;
  d.types = types;
  d.response = response;
  d.x.assign(x.size(), std::vector<double>(index.size()));
  d.y.resize(index.size());
  for (std::size_t r = 0; r < index.size(); ++r) {
    if (index[r] >= rows()) throw std::out_of_range("row index out of range");
    for (std::size_t c = 0; c < x.size(); ++c) d.x[c][r] = x[c][index[r]];
    d.y[r] = y[index[r]];
  }
  return d;
}

Dataset build_dataset(const RawTable& table, const Schema& schema) {
  schema.validate();
  std::vector<std::string> missing;
  std::vector<std::string> unknown;
  for (const auto& c : schema.columns) {
    if (std::find(table.header.begin(), table.header.end(), c.name) == table.header.end()) {
      missing.push_back(c.name);
    }
  }
  for (const auto& h : table.header) {
    if (schema.find(h) == nullptr) unknown.push_back(h);
  }
  if (!missing.empty() || !unknown.empty()) {
    std::string msg = "column mismatch:";
    for (const auto& m : missing) msg += " missing '" + m + "'";
    for (const auto& u : unknown) msg += " unexpected '" + u + "'";
    throw DataError(msg);
  }
  if (table.rows.empty()) throw DataError("data file has no rows");

  auto column_of = [&](const std::string& name) {
    return static_cast<std::size_t>(
        std::find(table.header.begin(), table.header.end(), name) - table.header.begin());
  };
  auto read_column = [&](const ColumnSpec& spec) {
    const std::size_t j = column_of(spec.name);
    std::vector<double> out(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const std::string& cell = table.rows[i][j];
      if (!spec.levels.empty()) {
        const auto it = std::find(spec.levels.begin(), spec.levels.end(), cell);
        if (it == spec.levels.end()) {
          throw DataError("column '" + spec.name + "' row " + std::to_string(i + 1) +
                          ": unknown level '" + cell + "'");
        }
        out[i] = static_cast<double>(it - spec.levels.begin());
      } else if (!parse_number(cell, out[i])) {
        throw DataError("column '" + spec.name + "' row " + std::to_string(i + 1) +
                        ": not a number '" + cell + "'");
      }
    }
    return out;
  };

  Dataset d;
  const ColumnSpec& resp = schema.columns[schema.response_index()];
  d.response = resp.name;
  d.y = read_column(resp);
  for (double v : d.y) {
    if (v != 0.0 && v != 1.0) {
      throw DataError("response '" + resp.name + "' must be coded 0/1");
    }
  }
  for (std::size_t j : schema.covariate_indices()) {
    const ColumnSpec& spec = schema.columns[j];
    d.names.push_back(spec.name);
    d.types.push_back(to_var_type(spec.type));
    d.x.push_back(read_column(spec));
  }
  return d;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

std::string dataset_to_csv(const Dataset& d) {
  std::string out;
  for (const auto& n : d.names) out += csv_field(n) + ',';
  out += csv_field(d.response) + '\n';
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (const auto& col : d.x) out += format_double(col[i]) + ',';
    out += format_double(d.y[i]) + '\n';
  }
  return out;
}

Schema dataset_schema(const Dataset& d) {
  Schema s;
  for (std::size_t c = 0; c < d.cols(); ++c) {
    ColumnType t = ColumnType::Continuous;
    if (d.types[c] == margins::VarType::Binary) t = ColumnType::Binary;
    if (d.types[c] == margins::VarType::Ordinal) t = ColumnType::Ordinal;
    s.columns.push_back({d.names[c], Role::Covariate, t, {}});
  }
  s.columns.push_back({d.response, Role::Response, ColumnType::Binary, {}});
  return s;
}

void write_text(const std::string& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace copulaboost::data
