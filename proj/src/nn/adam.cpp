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

#include "mixent/nn/adam.hpp"

#include <cmath>

#include "mixent/common/error.hpp"
#include "mixent/simd/kernels.hpp"

namespace mixent::nn {

Adam::Adam(std::vector<Tensor*> params, std::vector<std::string> names, AdamConfig config)
    : params_(std::move(params)), names_(std::move(names)), config_(config) {
  if (names_.size() != params_.size()) {
    throw ContractError("Adam: " + std::to_string(names_.size()) + " names for " +
                        std::to_string(params_.size()) + " parameters");
  }
  if (!(config_.lr > 0.0) || !(config_.beta1 >= 0.0 && config_.beta1 < 1.0) ||
      !(config_.beta2 >= 0.0 && config_.beta2 < 1.0) || !(config_.eps > 0.0)) {
    throw ContractError("Adam: invalid hyperparameters");
  }
  for (const Tensor* p : params_) {
    m_.emplace_back(p->shape());
    v_.emplace_back(p->shape());
  }
}

void Adam::step(const std::vector<const Tensor*>& grads) {
  if (grads.size() != params_.size()) {
    throw DimensionError("Adam::step got " + std::to_string(grads.size()) + " gradients for " +
                         std::to_string(params_.size()) + " parameters");
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!grads[i]) continue;
    if (!grads[i]->same_shape(*params_[i])) {
      throw DimensionError("gradient for '" + names_[i] + "' has shape " +
                           grads[i]->shape_string() + ", parameter is " +
                           params_[i]->shape_string());
    }
    if (!grads[i]->all_finite()) {
      throw OptimizerError("non-finite gradient for parameter '" + names_[i] + "'");
    }
  }
  ++step_;
  simd::AdamCoefficients c{};
  c.lr = config_.lr;
  c.beta1 = config_.beta1;
  c.beta2 = config_.beta2;
  c.eps = config_.eps;
  c.bias_correction1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  c.bias_correction2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!grads[i]) continue;
    simd::adam(c, params_[i]->data(), grads[i]->data(), m_[i].data(), v_[i].data());
  }
}

void Adam::restore(std::int64_t step, std::vector<Tensor> m, std::vector<Tensor> v) {
  if (m.size() != params_.size() || v.size() != params_.size()) {
    throw DimensionError("Adam::restore moment count mismatch");
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (!m[i].same_shape(*params_[i]) || !v[i].same_shape(*params_[i])) {
      throw DimensionError("Adam::restore moment shape mismatch for '" + names_[i] + "'");
    }
  }
  step_ = step;
  m_ = std::move(m);
  v_ = std::move(v);
}

}  // namespace mixent::nn
