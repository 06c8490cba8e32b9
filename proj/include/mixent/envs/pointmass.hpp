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

#include <array>

#include "mixent/envs/env.hpp"

namespace mixent::envs {

/// Point mass in the plane with two goals at (+-0.8, 0). Starts at the origin.
class PointMass final : public Env {
 public:
  static constexpr double kStepScale = 0.05;
  static constexpr double kGoalX = 0.8;
  static constexpr double kGoalWidth = 0.05;
  static constexpr double kActionCost = 0.01;

  PointMass();
  std::string_view name() const override { return "pointmass2g"; }
  std::size_t obs_dim() const override { return 2; }
  std::size_t action_dim() const override { return 2; }
  const dist::ActionBox& box() const override { return box_; }
  std::size_t horizon() const override { return 100; }

  /// Reward at `position` after taking `action`.
  static double reward(std::span<const double> position, std::span<const double> action);
  void set_position(double x, double y) { pos_ = {x, y}; }
  std::array<double, 2> position() const { return pos_; }

 protected:
  std::vector<double> do_reset(Rng& rng) override;
  StepResult do_step(std::span<const double> action) override;

 private:
  dist::ActionBox box_;
  std::array<double, 2> pos_{0.0, 0.0};
};

}  // namespace mixent::envs
