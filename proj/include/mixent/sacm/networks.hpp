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
#include <vector>

#include "mixent/common/rng.hpp"
#include "mixent/dist/mixture.hpp"
#include "mixent/dist/squashed_graph.hpp"
#include "mixent/nn/checkpoint.hpp"
#include "mixent/nn/mlp.hpp"

namespace mixent::sacm {

/// N Gaussian heads over a shared ReLU trunk. Each head is a linear map from
/// the trunk features to (mean, log_std) for every action coordinate.
struct PolicyNet {
  nn::Mlp trunk;
  std::vector<nn::Mlp> heads;
  std::size_t action_dim = 0;

  static PolicyNet make(std::size_t obs_dim, std::size_t action_dim, std::size_t n,
                        const std::vector<std::size_t>& hidden, Rng& rng);

  std::size_t size() const { return heads.size(); }
  std::size_t obs_dim() const { return trunk.input_width(); }

  /// Graph-free head distributions: result[i][row] is head i at obs row `row`.
  std::vector<std::vector<dist::DiagGaussian>> distributions(const nn::Tensor& obs) const;
  /// Mixture at a single observation.
  dist::MixtureSpec mixture(std::span<const double> obs, std::span<const double> w) const;

  struct Nodes {
    nn::Binding trunk;
    std::vector<nn::Binding> heads;
    std::vector<dist::GaussianHeadNodes> outputs;
  };
  Nodes forward(nn::Graph& g, nn::Var obs, nn::ParamMode mode = nn::ParamMode::kTrainable) const;

  void save(nn::Checkpoint& ck, std::string_view prefix) const;
  static PolicyNet load(const nn::Checkpoint& ck, std::string_view prefix, std::size_t n);
};

/// (state ++ action) -> N Q-values, plus a target copy that only moves by
/// Polyak averaging.
struct CriticNet {
  nn::Mlp online;
  nn::Mlp target;

  static CriticNet make(std::size_t obs_dim, std::size_t action_dim, std::size_t heads,
                        const std::vector<std::size_t>& hidden, Rng& rng);

  std::size_t heads() const { return online.output_width(); }
  /// Row-wise concatenation [s | a].
  static nn::Tensor join(const nn::Tensor& s, const nn::Tensor& a);
  nn::Tensor q(const nn::Tensor& s, const nn::Tensor& a) const;
  nn::Tensor q_target(const nn::Tensor& s, const nn::Tensor& a) const;
};

/// target <- tau * online + (1 - tau) * target, parameter by parameter.
void polyak(nn::Mlp& target, const nn::Mlp& online, double tau);

}  // namespace mixent::sacm
