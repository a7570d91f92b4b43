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

// Tabular data: CSV ingestion, schema sidecars and column type inference.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "copulaboost/margins.hpp"

namespace copulaboost::data {

enum class Role { Response, Covariate, Ignore };
enum class ColumnType { Continuous, Binary, Ordinal, Categorical };

std::string_view role_name(Role r);
Role parse_role(std::string_view s);
std::string_view column_type_name(ColumnType t);
ColumnType parse_column_type(std::string_view s);

// Categorical codes are handled as ordinal levels by the margins.
margins::VarType to_var_type(ColumnType t);

struct ColumnSpec {
  std::string name;
  Role role = Role::Covariate;
  ColumnType type = ColumnType::Continuous;
  std::vector<std::string> levels;  // categorical text levels, code = index

  bool operator==(const ColumnSpec&) const = default;
};

struct Schema {
  std::vector<ColumnSpec> columns;

  // Throws DataError unless exactly one binary response exists.
  void validate() const;
  std::size_t response_index() const;
  std::vector<std::size_t> covariate_indices() const;
  const ColumnSpec* find(std::string_view name) const;

  bool operator==(const Schema&) const = default;
};

std::string schema_to_json(const Schema& s);
Schema schema_from_json(std::string_view text);

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

RawTable parse_csv(std::string_view text);
RawTable read_csv(const std::string& path);

inline constexpr std::size_t kInferMaxLevels = 10;
inline constexpr std::size_t kInferMinRows = 100;

// Numeric columns with at most 10 distinct values over at least 100 rows are
// discrete (binary for two levels); non-numeric columns are categorical.
Schema infer_schema(const RawTable& table, std::string_view response);

struct Dataset {
  std::vector<std::string> names;  // covariates, schema order
  std::vector<margins::VarType> types;
  std::vector<std::vector<double>> x;  // x[c][i]
  std::vector<double> y;               // 0/1
  std::string response;

  std::size_t rows() const { return y.size(); }
  std::size_t cols() const { return x.size(); }
  Dataset select_rows(std::span<const std::size_t> index) const;

  bool operator==(const Dataset&) const = default;
};

// Checks column names against the schema; the error lists every offender.
Dataset build_dataset(const RawTable& table, const Schema& schema);

// Quotes a CSV field when it contains a separator, quote or line break.
std::string csv_field(std::string_view s);
std::string format_double(double v);
std::string dataset_to_csv(const Dataset& d);
Schema dataset_schema(const Dataset& d);

void write_text(const std::string& path, std::string_view text);
std::string read_text(const std::string& path);

}  // namespace copulaboost::data
