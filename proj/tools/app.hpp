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

// The copulaboost command-line application, callable in-process.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "copulaboost/copula.hpp"

namespace copulaboost::cli {

enum ExitCode { kOk = 0, kUsage = 2, kDataError = 3, kNumericFailure = 4 };

// Runs one command; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "0.25", "1", or a fraction such as "1/3".
double parse_gamma(std::string_view text);
// Comma-separated family names.
std::vector<copula::Family> parse_families(std::string_view text);

}  // namespace copulaboost::cli
