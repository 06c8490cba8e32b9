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
#include <span>
#include <string>
#include <vector>

#include "mixent/common/rng.hpp"
#include "mixent/envs/env.hpp"
#include "mixent/sacm/config.hpp"
#include "mixent/sacm/networks.hpp"

namespace mixent::sacm {

/// One row of the per-block metrics CSV.
struct BlockMetrics {
  std::size_t step = 0;   // environment steps so far
  std::size_t block = 0;  // 1-based
  double eval_return_mean = 0.0;
  double eval_return_std = 0.0;
  double critic_loss = 0.0;        // block average; 0 when no gradient step ran
  std::vector<double> policy_loss;  // per head, block average
  std::vector<double> alpha;        // per head, at block end
  std::vector<double> head_entropy;  // per head, sampled on replay states
  double mean_pairwise_kl = 0.0;
  double sampled_mixture_entropy = 0.0;
};

std::vector<std::string> metrics_header(std::size_t heads);
std::vector<std::string> metrics_row(const BlockMetrics& m);
bool metrics_finite(const BlockMetrics& m);

struct PolicyDiagnostics {
  std::vector<double> head_entropy;      // E_s[-log pi_i(a|s)], a ~ pi_i
  double mean_pairwise_kl = 0.0;         // E_s of the mean over ordered pairs i != j
  double sampled_mixture_entropy = 0.0;  // E_s of the one-sample mixture estimator
};

/// Averages over the rows of `states` (one sample per head per state).
PolicyDiagnostics diagnose(const PolicyNet& policy, std::span<const double> w,
                           const dist::ActionBox& box, const nn::Tensor& states, Rng& rng);

struct EvalResult {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over episodes
  std::vector<double> returns;
};

/// Rollouts without learning, from a fixed seed.
EvalResult evaluate(const PolicyNet& policy, std::span<const double> w, envs::Env& env,
                    std::size_t episodes, ActMode mode, std::uint64_t seed);

}  // namespace mixent::sacm
