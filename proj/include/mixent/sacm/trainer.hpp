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
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "mixent/common/error.hpp"
#include "mixent/sacm/config.hpp"
#include "mixent/sacm/metrics.hpp"
#include "mixent/sacm/networks.hpp"

namespace mixent::sacm {

/// Raised when a block produces a non-finite value. The message carries the
/// block, step and cause; the last good checkpoint (if any) is left on disk.
class TrainingAborted : public Error {
 public:
  using Error::Error;
};

struct TrainOptions {
  /// When set, metrics.csv and checkpoints/ are written here.
  std::filesystem::path out_dir;
  /// Called after each block's metrics are final.
  std::function<void(const BlockMetrics&)> on_block;
};

struct TrainResult {
  std::vector<BlockMetrics> metrics;
  PolicyNet policy;
  std::vector<double> weights;
  std::vector<double> alphas;
  std::size_t env_steps = 0;
  bool stopped_early = false;
};

/// Seed used for every evaluation of a run, so blocks are compared on the same
/// episodes.
std::uint64_t evaluation_seed(const TrainConfig& config);

/// Alternates rollout blocks of `rollout_block` environment steps with
/// `gradient_block` gradient steps until `total_steps` environment steps have
/// been taken (or `stop_return` is reached), evaluating after every block.
TrainResult train(const TrainConfig& config, const TrainOptions& options = {});

}  // namespace mixent::sacm
