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

#include "mixent/envs/env.hpp"

namespace mixent::envs {

inline constexpr double kBanditRightPeak = 0.6;
inline constexpr double kBanditLeftPeak = -0.6;

/// r(a) = exp(-(a-0.6)^2/0.02) + 0.8 exp(-(a+0.6)^2/0.02)
double bandit_reward(double a);

/// One-step task with a bimodal reward over a in [-1, 1]. The observation is
/// the constant [1].
class Bandit final : public Env {
 public:
  Bandit();
  std::string_view name() const override { return "bandit"; }
  std::size_t obs_dim() const override { return 1; }
  std::size_t action_dim() const override { return 1; }
  const dist::ActionBox& box() const override { return box_; }
  std::size_t horizon() const override { return 1; }

 protected:
  std::vector<double> do_reset(Rng& rng) override;
  StepResult do_step(std::span<const double> action) override;

 private:
  dist::ActionBox box_;
};

}  // namespace mixent::envs
