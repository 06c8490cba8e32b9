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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mixent::sacm {

enum class Variant { kSacm, kS2acm };
/// How critic heads are fed: every head sees the whole batch, or each
/// transition is assigned to one head at insertion and only trains that head.
enum class CriticData { kShared, kBootstrap };
enum class ActMode { kStochastic, kDeterministic };

std::string_view variant_name(Variant v);
std::string_view critic_data_name(CriticData c);
std::string_view act_mode_name(ActMode m);
ActMode parse_act_mode(std::string_view name);

/// Every hyperparameter of a training run. Loaded from flat key = value text;
/// set() and get() use the same key names as the file format.
struct TrainConfig {
  std::string env = "pendulum";
  std::size_t n = 1;
  std::vector<double> weights;  // empty: uniform
  double gamma = 0.99;
  double tau = 0.005;
  double lr = 3e-4;
  std::size_t batch = 256;
  std::size_t rollout_block = 1000;
  std::size_t gradient_block = 1000;
  std::optional<double> target_entropy;  // unset: -log(action_dim)
  double alpha_init = 1.0;
  std::size_t total_steps = 100000;
  Variant variant = Variant::kSacm;
  CriticData critic_data = CriticData::kShared;
  std::uint64_t seed = 0;
  std::vector<std::size_t> hidden{256, 256};
  std::size_t replay_capacity = 1000000;
  std::size_t eval_episodes = 10;
  ActMode eval_mode = ActMode::kStochastic;
  std::size_t checkpoint_every = 10;  // blocks; 0 writes only the final checkpoint
  std::optional<double> stop_return;  // stop once the evaluation mean reaches this

  /// Resolved mixing weights (uniform when none were given).
  std::vector<double> mixture_weights() const;
  double resolved_target_entropy(std::size_t action_dim) const;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  /// Throws ConfigError for unknown keys and unparsable values.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  static const std::vector<std::string>& keys();
  static bool has_key(std::string_view key);

  /// All keys in keys() order.
  std::vector<std::pair<std::string, std::string>> to_pairs() const;
  /// "key = value" lines in keys() order.
  std::string to_text() const;
};

}  // namespace mixent::sacm
