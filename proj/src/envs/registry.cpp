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

#include <sstream>

#include "mixent/common/error.hpp"
#include "mixent/common/log.hpp"
#include "mixent/envs/bandit.hpp"
#include "mixent/envs/env.hpp"
#include "mixent/envs/pendulum.hpp"
#include "mixent/envs/pointmass.hpp"

namespace mixent::envs {

std::vector<double> Env::reset(Rng& rng) {
  steps_ = 0;
  done_ = false;
  return do_reset(rng);
}

StepResult Env::step(std::span<const double> action) {
  if (done_) throw ContractError(std::string(name()) + ": step() after episode end without reset()");
  if (action.size() != action_dim()) {
    throw DimensionError(std::string(name()) + ": action has " + std::to_string(action.size()) +
                         " entries, expected " + std::to_string(action_dim()));
  }
  std::vector<double> a(action.begin(), action.end());
  if (box().clip(a)) {
    if (clips_ == 0) {
      std::ostringstream os;
      os << name() << ": action outside the box was clipped (further clips not reported)";
      log::warn(os.str());
    }
    ++clips_;
  }
  StepResult r = do_step(a);
  ++steps_;
  if (steps_ >= horizon()) r.done = true;
  done_ = r.done;
  return r;
}

const std::vector<std::string>& env_names() {
  static const std::vector<std::string> names{"bandit", "pointmass2g", "pendulum"};
  return names;
}

bool is_known_env(std::string_view name) {
  for (const auto& n : env_names()) {
    if (n == name) return true;
  }
  return false;
}

std::unique_ptr<Env> make_env(std::string_view name) {
  if (name == "bandit") return std::make_unique<Bandit>();
  if (name == "pointmass2g") return std::make_unique<PointMass>();
  if (name == "pendulum") return std::make_unique<Pendulum>();
  throw ConfigError("unknown environment '" + std::string(name) + "'");
}

}  // namespace mixent::envs
