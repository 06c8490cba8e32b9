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

#include "mixent/envs/pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mixent::envs {

Pendulum::Pendulum() : box_(dist::ActionBox::symmetric(1, kMaxTorque)) {}

double Pendulum::normalize_angle(double theta) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double x = std::fmod(theta + std::numbers::pi, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  return x - std::numbers::pi;
}

std::vector<double> Pendulum::observation() const {
  return {std::cos(theta_), std::sin(theta_), theta_dot_};
}

std::vector<double> Pendulum::do_reset(Rng& rng) {
  theta_ = rng.uniform(-std::numbers::pi, std::numbers::pi);
  theta_dot_ = rng.uniform(-1.0, 1.0);
  return observation();
}

StepResult Pendulum::do_step(std::span<const double> action) {
  const double u = action[0];
  const double th = normalize_angle(theta_);
  const double cost = th * th + 0.1 * theta_dot_ * theta_dot_ + 0.001 * u * u;

  // Explicit Euler: both updates use the pre-step state.
  const double accel = 3.0 * kGravity / (2.0 * kLength) * std::sin(theta_) +
                       3.0 * u / (kMass * kLength * kLength);
  const double next_theta = theta_ + kDt * theta_dot_;
  theta_dot_ = std::clamp(theta_dot_ + kDt * accel, -kMaxSpeed, kMaxSpeed);
  theta_ = next_theta;
  return {observation(), -cost, false, false};
}

}  // namespace mixent::envs
