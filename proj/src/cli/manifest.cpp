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

#include "mixent/cli/manifest.hpp"

#include <openssl/sha.h>

#include <cstdlib>
#include <fstream>

#include "mixent/common/error.hpp"

namespace mixent::cli {

std::string git_blob_hash(std::string_view content) {
  std::string data = "blob " + std::to_string(content.size());
  data.push_back('\0');
  data.append(content);
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned char b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 15]);
  }
  return out;
}

std::string config_hash(const sacm::TrainConfig& config) {
  sacm::TrainConfig c = config;
  c.seed = 0;
  return git_blob_hash(c.to_text());
}

std::filesystem::path output_root(const std::optional<std::filesystem::path>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MIXENT_OUT"); env && *env) return env;
  return "runs";
}

std::filesystem::path config_dir(const std::filesystem::path& root, const std::string& hash) {
  return root / hash.substr(0, 12);
}

std::filesystem::path run_dir(const std::filesystem::path& root, const std::string& hash,
                              std::uint64_t seed) {
  return config_dir(root, hash) / ("seed-" + std::to_string(seed));
}

RunManifest RunManifest::create(const sacm::TrainConfig& config, std::vector<std::uint64_t> seeds,
                                const std::filesystem::path& root) {
  RunManifest m;
  m.config = config;
  m.seeds = std::move(seeds);
  m.hash = config_hash(config);
  m.out_dir = config_dir(root, m.hash);
  for (auto s : m.seeds) m.csv_paths.push_back(run_dir(root, m.hash, s) / "metrics.csv");
  return m;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["config_hash"] = hash;
  for (const auto& [k, v] : config.to_pairs()) {
    if (k != "seed") j["config"][k] = v;
  }
  j["seeds"] = seeds;
  j["output_dir"] = out_dir.generic_string();
  j["runs"] = nlohmann::json::array();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    j["runs"].push_back({{"seed", seeds[i]},
                         {"dir", csv_paths[i].parent_path().generic_string()},
                         {"csv", csv_paths[i].generic_string()}});
  }
  return j;
}

void RunManifest::write() const {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!out) throw ContractError("cannot write manifest in " + out_dir.string());
    out << to_json().dump(2) << '\n';
  }
  sacm::TrainConfig c = config;
  c.seed = 0;
  std::ofstream out(out_dir / "config.txt", std::ios::binary | std::ios::trunc);
  out << "# seed is set per run; see manifest.json\n" << c.to_text();
}

}  // namespace mixent::cli
