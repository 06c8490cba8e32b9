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
#include <cstdint>
#include <span>
#include <vector>

#include "mixent/common/rng.hpp"
#include "mixent/nn/tensor.hpp"

namespace mixent::sacm {

struct Transition {
  std::vector<double> s;
  std::vector<double> a;
  double r = 0.0;
  std::vector<double> s2;
  bool done = false;  // terminal: no bootstrap from s2
};

/// Columns of a sampled minibatch, one row per transition.
struct Batch {
  nn::Tensor s;     // [B, obs]
  nn::Tensor a;     // [B, act]
  nn::Tensor r;     // [B, 1]
  nn::Tensor s2;    // [B, obs]
  nn::Tensor done;  // [B, 1], 1.0 for terminal
  std::vector<std::uint32_t> head;  // bootstrap head assignment per row
  std::size_t size() const { return head.size(); }
};

/// Fixed-capacity ring buffer with uniform sampling with replacement. Each
/// stored transition carries a bootstrap head id drawn uniformly from
/// [0, heads) at insertion time.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t obs_dim, std::size_t action_dim,
               std::size_t heads = 1);

  /// Throws DimensionError on shape mismatch and DomainError on a non-finite reward.
  void add(const Transition& t, Rng& rng);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t action_dim() const { return action_dim_; }

  /// Throws ContractError if fewer than `batch` transitions are stored.
  Batch sample(std::size_t batch, Rng& rng) const;
  Transition at(std::size_t i) const;

 private:
  std::size_t capacity_;
  std::size_t obs_dim_;
  std::size_t action_dim_;
  std::size_t heads_;
  std::size_t size_ = 0;
  std::size_t next_ = 0;
  std::vector<double> s_, a_, r_, s2_, done_;
  std::vector<std::uint32_t> head_;
};

}  // namespace mixent::sacm
