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

// Command implementations behind the mixent executable. Each returns a
// process exit code: 0 success, 1 a failed check, 2 invalid arguments or
// configuration.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mixent/cli/config_file.hpp"
#include "mixent/cli/svg_chart.hpp"

namespace mixent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

struct TrainArgs {
  std::optional<std::filesystem::path> config;
  KeyValues overrides;  // applied after the file, in order
  std::size_t seeds = 1;  // runs seeds seed, seed+1, ...
  std::size_t jobs = 0;   // 0: available parallelism
  std::optional<std::filesystem::path> out;
};

struct EvalArgs {
  std::filesystem::path checkpoint;
  std::size_t episodes = 10;
  std::string mode = "stochastic";
  std::uint64_t seed = 0;
};

struct EntropyCheckArgs {
  std::size_t count = 1000;
  std::size_t dims = 4;        // maximum dimension
  std::size_t components = 5;  // maximum component count
  std::uint64_t seed = 0;
  std::string oracle = "auto";
  std::size_t mc_samples = 1000000;
  std::size_t sampled_sets = 1000;
  double mean_range = 5.0;
  double log_std_range = 1.0;
  std::optional<std::filesystem::path> output;  // CSV; stdout when absent
};

struct VarianceCheckArgs {
  std::size_t mixtures = 50;
  std::size_t resamples = 2000;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> output;
};

struct SweepArgs {
  std::string spec;  // key=v1,v2,...
  TrainArgs train;
};

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);
int cmd_entropy_check(const EntropyCheckArgs& args, std::ostream& out, std::ostream& err);
int cmd_variance_check(const VarianceCheckArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

/// Evaluation-return chart for one configuration, built only from the given
/// metrics CSVs: one line per seed plus the mean over seeds at each step.
LineChart train_chart_from_csvs(const std::vector<std::filesystem::path>& csvs,
                                const std::vector<std::string>& names, const std::string& title);

/// Mean evaluation-return curve per sweep value, built from a combined sweep CSV.
LineChart sweep_chart_from_csv(const std::filesystem::path& combined, const std::string& key);

}  // namespace mixent::cli
