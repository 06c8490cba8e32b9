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

#include <cstdint>
#include <string>
#include <vector>

#include "mixent/nn/tensor.hpp"

namespace mixent::nn {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam over a fixed list of externally owned parameter tensors. The tensors
/// must outlive the optimizer and keep their shapes.
class Adam {
 public:
  Adam() = default;
  Adam(std::vector<Tensor*> params, std::vector<std::string> names, AdamConfig config = {});

  /// One bias-corrected update. `grads[i]` pairs with the i-th parameter; a
  /// null entry means the parameter received no gradient and is left alone.
  /// Throws DimensionError on shape mismatch and OptimizerError (naming the
  /// parameter) on a non-finite gradient, in which case nothing is modified.
  void step(const std::vector<const Tensor*>& grads);

  std::int64_t step_count() const { return step_; }
  const AdamConfig& config() const { return config_; }
  std::size_t size() const { return params_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Tensor>& first_moments() const { return m_; }
  const std::vector<Tensor>& second_moments() const { return v_; }

  /// Restores moment state, e.g. from a checkpoint.
  void restore(std::int64_t step, std::vector<Tensor> m, std::vector<Tensor> v);

 private:
  std::vector<Tensor*> params_;
  std::vector<std::string> names_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  AdamConfig config_;
  std::int64_t step_ = 0;
};

}  // namespace mixent::nn
