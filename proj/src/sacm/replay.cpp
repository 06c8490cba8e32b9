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

#include "mixent/sacm/replay.hpp"

#include <algorithm>
#include <cmath>

#include "mixent/common/error.hpp"

namespace mixent::sacm {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t obs_dim, std::size_t action_dim,
                           std::size_t heads)
    : capacity_(capacity),
      obs_dim_(obs_dim),
      action_dim_(action_dim),
      heads_(heads),
      s_(capacity * obs_dim),
      a_(capacity * action_dim),
      r_(capacity),
      s2_(capacity * obs_dim),
      done_(capacity),
      head_(capacity) {
  if (capacity == 0 || heads == 0) throw ContractError("replay capacity and head count must be positive");
}

void ReplayBuffer::add(const Transition& t, Rng& rng) {
  if (t.s.size() != obs_dim_ || t.s2.size() != obs_dim_ || t.a.size() != action_dim_) {
    throw DimensionError("transition shape does not match the replay buffer");
  }
  if (!std::isfinite(t.r)) throw DomainError("non-finite reward in transition");
  const std::size_t i = next_;
  std::copy(t.s.begin(), t.s.end(), s_.begin() + i * obs_dim_);
  std::copy(t.a.begin(), t.a.end(), a_.begin() + i * action_dim_);
  std::copy(t.s2.begin(), t.s2.end(), s2_.begin() + i * obs_dim_);
  r_[i] = t.r;
  done_[i] = t.done ? 1.0 : 0.0;
  head_[i] = heads_ > 1 ? static_cast<std::uint32_t>(rng.index(heads_)) : 0u;
  next_ = (next_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

Batch ReplayBuffer::sample(std::size_t batch, Rng& rng) const {
  if (batch == 0 || size_ < batch) {
    throw ContractError("replay holds " + std::to_string(size_) + " transitions, batch needs " +
                        std::to_string(batch));
  }
  Batch b{nn::Tensor::matrix(batch, obs_dim_), nn::Tensor::matrix(batch, action_dim_),
          nn::Tensor::matrix(batch, 1),        nn::Tensor::matrix(batch, obs_dim_),
          nn::Tensor::matrix(batch, 1),        std::vector<std::uint32_t>(batch)};
  for (std::size_t k = 0; k < batch; ++k) {
    const std::size_t i = rng.index(size_);
    std::copy_n(s_.begin() + i * obs_dim_, obs_dim_, b.s.row_span(k).begin());
    std::copy_n(a_.begin() + i * action_dim_, action_dim_, b.a.row_span(k).begin());
    std::copy_n(s2_.begin() + i * obs_dim_, obs_dim_, b.s2.row_span(k).begin());
    b.r(k, 0) = r_[i];
    b.done(k, 0) = done_[i];
    b.head[k] = head_[i];
  }
  return b;
}

Transition ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw ContractError("replay index out of range");
  Transition t;
  t.s.assign(s_.begin() + i * obs_dim_, s_.begin() + (i + 1) * obs_dim_);
  t.a.assign(a_.begin() + i * action_dim_, a_.begin() + (i + 1) * action_dim_);
  t.s2.assign(s2_.begin() + i * obs_dim_, s2_.begin() + (i + 1) * obs_dim_);
  t.r = r_[i];
  t.done = done_[i] != 0.0;
  return t;
}

}  // namespace mixent::sacm
