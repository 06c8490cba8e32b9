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

/// Torque-limited pendulum swing-up. theta = 0 is upright.
class Pendulum final : public Env {
 public:
  static constexpr double kGravity = 10.0;
  static constexpr double kMass = 1.0;
  static constexpr double kLength = 1.0;
  static constexpr double kDt = 0.05;
  static constexpr double kMaxSpeed = 8.0;
  static constexpr double kMaxTorque = 2.0;

  Pendulum();
  std::string_view name() const override { return "pendulum"; }
  std::size_t obs_dim() const override { return 3; }
  std::size_t action_dim() const override { return 1; }
  const dist::ActionBox& box() const override { return box_; }
  std::size_t horizon() const override { return 200; }

  void set_state(double theta, double theta_dot) {
    theta_ = theta;
    theta_dot_ = theta_dot;
  }
  double theta() const { return theta_; }
  double theta_dot() const { return theta_dot_; }
  std::vector<double> observation() const;

  /// Angle wrapped into [-pi, pi).
  static double normalize_angle(double theta);

 protected:
  std::vector<double> do_reset(Rng& rng) override;
  StepResult do_step(std::span<const double> action) override;

 private:
  dist::ActionBox box_;
  double theta_ = 0.0;
  double theta_dot_ = 0.0;
};

}  // namespace mixent::envs
