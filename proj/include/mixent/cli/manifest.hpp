// Copyright 2026 The mixent Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mixent/sacm/config.hpp"

namespace mixent::cli {

/// SHA-1 of "blob <size>\0<content>", as git computes object ids.
std::string git_blob_hash(std::string_view content);

/// Hash of the configuration text with the seed removed, so all seeds of one
/// configuration share it.
std::string config_hash(const sacm::TrainConfig& config);

/// Explicit flag, else $MIXENT_OUT, else "runs".
std::filesystem::path output_root(const std::optional<std::filesystem::path>& flag);

/// <root>/<first 12 hash chars>
std::filesystem::path config_dir(const std::filesystem::path& root, const std::string& hash);
/// <root>/<first 12 hash chars>/seed-<seed>
std::filesystem::path run_dir(const std::filesystem::path& root, const std::string& hash,
                              std::uint64_t seed);

struct RunManifest {
  sacm::TrainConfig config;
  std::vector<std::uint64_t> seeds;
  std::string hash;
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> csv_paths;

  static RunManifest create(const sacm::TrainConfig& config, std::vector<std::uint64_t> seeds,
                            const std::filesystem::path& root);
  nlohmann::json to_json() const;
  /// Writes <out_dir>/manifest.json and <out_dir>/config.txt.
  void write() const;
};

}  // namespace mixent::cli
