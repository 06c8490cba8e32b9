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

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mixent/sacm/config.hpp"

namespace mixent::cli {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Flat "key = value" lines. '#' starts a comment; blank lines are skipped.
/// Throws ConfigError with the line number on malformed lines.
KeyValues parse_config_text(std::string_view text);

/// Applies pairs in order; later pairs win. Errors name the offending key.
void apply_overrides(sacm::TrainConfig& config, const KeyValues& pairs);

sacm::TrainConfig load_config(const std::filesystem::path& path);

}  // namespace mixent::cli
