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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mixent/common/rng.hpp"
#include "mixent/dist/gaussian.hpp"

namespace mixent::envs {

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;      // episode over: terminal or horizon reached
  bool terminal = false;  // true end of the task; bootstrapping stops here
};

/// Episodic environment with a bounded action box. Out-of-box actions are
/// clipped; the first clip per instance is logged as a warning.
class Env {
 public:
  virtual ~Env() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t obs_dim() const = 0;
  virtual std::size_t action_dim() const = 0;
  virtual const dist::ActionBox& box() const = 0;
  virtual std::size_t horizon() const = 0;

  std::vector<double> reset(Rng& rng);
  /// Throws ContractError if the episode is over and reset() was not called.
  StepResult step(std::span<const double> action);

  std::size_t steps() const { return steps_; }
  bool done() const { return done_; }
  std::size_t clip_count() const { return clips_; }

 protected:
  virtual std::vector<double> do_reset(Rng& rng) = 0;
  virtual StepResult do_step(std::span<const double> action) = 0;

 private:
  std::size_t steps_ = 0;
  std::size_t clips_ = 0;
  bool done_ = true;
};

std::unique_ptr<Env> make_env(std::string_view name);
bool is_known_env(std::string_view name);
const std::vector<std::string>& env_names();

}  // namespace mixent::envs
