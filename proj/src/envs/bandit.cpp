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

#include "mixent/envs/bandit.hpp"

#include <cmath>

namespace mixent::envs {

double bandit_reward(double a) {
  const double r = a - kBanditRightPeak;
  const double l = a - kBanditLeftPeak;
  return std::exp(-r * r / 0.02) + 0.8 * std::exp(-l * l / 0.02);
}

Bandit::Bandit() : box_(dist::ActionBox::symmetric(1, 1.0)) {}

std::vector<double> Bandit::do_reset(Rng&) { return {1.0}; }

StepResult Bandit::do_step(std::span<const double> action) {
  return {{1.0}, bandit_reward(action[0]), true, true};
}

}  // namespace mixent::envs
