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

// Run manifests: what a command read, how it was configured and what it
// wrote, with SHA-256 digests so a replay can be checked byte for byte.

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace copulaboost::cli {

inline constexpr std::string_view kManifestFormat = "copulaboost-manifest/1";
inline constexpr std::string_view kManifestFile = "manifest.json";

std::string sha256_hex(std::string_view bytes);
std::string file_sha256(const std::string& path);

struct RunManifest {
  std::string command;
  std::vector<std::string> args;  // argv after the program name
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;   // path -> digest
  std::map<std::string, std::string> outputs;  // file name in the output directory -> digest
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json generator;  // simulation model description, when applicable

  std::string to_json() const;
  static RunManifest from_json(std::string_view text);
};

}  // namespace copulaboost::cli
