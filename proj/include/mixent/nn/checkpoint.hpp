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
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mixent/nn/mlp.hpp"
#include "mixent/nn/tensor.hpp"

namespace mixent::nn {

/// Parameter snapshot.
///
/// On disk: one line of JSON (format tag, step counter, free-form metadata and
/// an ordered tensor table with names, shapes and layer activation tags),
/// a '\n', then every tensor's values as a flat little-endian f64 stream in
/// table order.
class Checkpoint {
 public:
  struct Entry {
    std::string name;
    Tensor tensor;
    std::string activation;  // empty unless the tensor is a layer weight
  };

  std::int64_t step = 0;
  nlohmann::json meta = nlohmann::json::object();

  void add(std::string name, Tensor tensor, std::string activation = {});
  void add_mlp(std::string_view prefix, const Mlp& net);

  bool contains(std::string_view name) const;
  const Tensor& get(std::string_view name) const;
  /// Rebuilds the network stored under `prefix` by add_mlp().
  Mlp mlp(std::string_view prefix) const;

  const std::vector<Entry>& entries() const { return entries_; }

  std::string serialize() const;
  static Checkpoint deserialize(std::string_view bytes);

  /// Writes to a temporary sibling and renames, so an existing file at `path`
  /// survives a failed write.
  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);

 private:
  std::vector<Entry> entries_;
};

}  // namespace mixent::nn
