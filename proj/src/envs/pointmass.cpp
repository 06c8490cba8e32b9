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

#include "mixent/envs/pointmass.hpp"

#include <algorithm>
#include <cmath>

namespace mixent::envs {

PointMass::PointMass() : box_(dist::ActionBox::symmetric(2, 1.0)) {}

double PointMass::reward(std::span<const double> p, std::span<const double> a) {
  double best = 0.0;
  for (double gx : {kGoalX, -kGoalX}) {
    const double dx = p[0] - gx;
    const double dy = p[1];
    best = std::max(best, std::exp(-(dx * dx + dy * dy) / kGoalWidth));
  }
  return best - kActionCost * (a[0] * a[0] + a[1] * a[1]);
}

std::vector<double> PointMass::do_reset(Rng&) {
  pos_ = {0.0, 0.0};
  return {0.0, 0.0};
}

StepResult PointMass::do_step(std::span<const double> a) {
  pos_[0] += kStepScale * a[0];
  pos_[1] += kStepScale * a[1];
  return {{pos_[0], pos_[1]}, reward(pos_, a), false, false};
}

}  // namespace mixent::envs
