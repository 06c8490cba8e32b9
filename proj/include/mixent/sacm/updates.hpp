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

// One gradient step of the mixture actor-critic, split into the pieces that
// tests exercise separately: target values, critic regression, per-head
// policy improvement, temperature tuning and target averaging.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "mixent/common/rng.hpp"
#include "mixent/dist/gaussian.hpp"
#include "mixent/nn/adam.hpp"
#include "mixent/nn/graph.hpp"
#include "mixent/sacm/config.hpp"
#include "mixent/sacm/networks.hpp"
#include "mixent/sacm/replay.hpp"

namespace mixent::sacm {

/// Categorical draw of a mixture component.
std::size_t select_component(std::span<const double> w, Rng& rng);

struct ActResult {
  std::vector<double> action;
  std::size_t component = 0;
};

/// Draws a component, then either a reparameterized sample from it
/// (stochastic) or its squashed mean (deterministic).
ActResult act(const PolicyNet& policy, std::span<const double> obs, std::span<const double> w,
              const dist::ActionBox& box, Rng& rng, ActMode mode);

/// sum_i w_i alpha_i.
double effective_alpha(std::span<const double> w, std::span<const double> alphas);

/// Partial-mass-normalized entropy bonus for head i:
///   sum_{j<=i} w_j H_j / sum_{j<=i} w_j.
double s2acm_entropy_bonus(std::size_t i, std::span<const double> mixed_marginal,
                           std::span<const double> w);

/// Noise consumed by critic_target: a component index per row (used by the
/// mixture target) and one standard-normal matrix [B, act] per head.
struct TargetNoise {
  std::vector<std::size_t> component;
  std::vector<nn::Tensor> eps;
};

TargetNoise draw_target_noise(std::size_t batch, std::size_t action_dim, std::span<const double> w,
                              Rng& rng);

struct TargetContext {
  std::vector<double> weights;
  double gamma = 0.99;
  double alpha_eff = 1.0;
  Variant variant = Variant::kSacm;
  dist::ActionBox box;
};

/// Bootstrap targets [B, N], one column per critic head.
///
/// sacm:  a' ~ pi(.|s'), every column is
///        r + gamma (1 - done) (sum_i w_i Qbar_i(s', a') - alpha_eff log pi(a'|s')).
/// s2acm: a'_i ~ pi_i(.|s'), column i is
///        r + gamma (1 - done) (Qbar_i(s', a'_i) + alpha_eff bonus_i)
///        with bonus_i from s2acm_entropy_bonus over H_j = -log pi(a'_j|s').
nn::Tensor critic_target(const Batch& batch, const PolicyNet& policy, const CriticNet& critic,
                         const TargetContext& ctx, const TargetNoise& noise);

/// Per-entry weights [B, N] of the squared critic error: 1/B everywhere for
/// shared data; for bootstrap data, row r counts only toward head[r], scaled
/// by 1 / (rows assigned to that head).
nn::Tensor critic_loss_weights(const Batch& batch, std::size_t heads, CriticData mode);

/// 0.5 * sum(weights * (Q(s, a) - y)^2) / N, with critic parameters trainable.
nn::Var critic_loss(nn::Graph& g, const nn::Mlp& critic, const Batch& batch, const nn::Tensor& y,
                    const nn::Tensor& weights, nn::Binding* binding);

/// One Adam step on critic_loss. Returns the loss value.
double critic_update(nn::Mlp& critic, nn::Adam& opt, const Batch& batch, const nn::Tensor& y,
                     CriticData mode);

struct PolicyLossNodes {
  nn::Var total;                   // sum of head losses
  std::vector<nn::Var> head_loss;  // mean(alpha_i log pi_i(a_i|s) - Q_i(s, a_i))
  std::vector<nn::Var> log_prob;   // [B, 1] per head
  PolicyNet::Nodes policy;
};

/// Builds every head's loss on one graph. `eps[i]` is [B, act]. The critic
/// enters as constants so only policy parameters receive gradients, while
/// the gradient still flows through the reparameterized actions.
PolicyLossNodes policy_loss(nn::Graph& g, const PolicyNet& policy, const nn::Mlp& critic,
                            const nn::Tensor& s, const std::vector<nn::Tensor>& eps,
                            std::span<const double> alphas, const dist::ActionBox& box,
                            nn::ParamMode policy_mode = nn::ParamMode::kTrainable);

/// Optimizer state for the policy: one Adam for the shared trunk, one per head.
struct PolicyOptimizers {
  nn::Adam trunk;
  std::vector<nn::Adam> heads;
  PolicyOptimizers(PolicyNet& policy, const nn::AdamConfig& config);
};

struct PolicyStepStats {
  std::vector<double> loss;
  std::vector<double> mean_log_prob;
};

PolicyStepStats policy_update(PolicyNet& policy, PolicyOptimizers& opt, const nn::Mlp& critic,
                              const nn::Tensor& s, const std::vector<nn::Tensor>& eps,
                              std::span<const double> alphas, const dist::ActionBox& box);

/// Gradient of the temperature objective with respect to log alpha:
/// E[-log pi] - target_entropy.
double alpha_gradient(double mean_log_prob, double target_entropy);

/// One Adam step on a 1x1 log-alpha tensor; returns the new alpha.
double alpha_update(nn::Tensor& log_alpha, nn::Adam& opt, double mean_log_prob,
                    double target_entropy);

struct GradientStats {
  double critic_loss = 0.0;
  std::vector<double> policy_loss;
  std::vector<double> head_entropy;  // -mean log pi_i over the batch
  std::vector<double> alpha;         // after the update
};

/// Networks, optimizers and temperatures of one run. Optimizers hold
/// pointers into the networks, so an Agent is neither copyable nor movable.
class Agent {
 public:
  Agent(const TrainConfig& config, std::size_t obs_dim, const dist::ActionBox& box, Rng& rng);
  Agent(const Agent&) = delete;
  Agent& operator=(const Agent&) = delete;

  PolicyNet policy;
  CriticNet critic;

  const std::vector<double>& weights() const { return weights_; }
  const dist::ActionBox& box() const { return box_; }
  double target_entropy() const { return target_entropy_; }
  std::vector<double> alphas() const;
  double alpha_eff() const { return effective_alpha(weights_, alphas()); }

  /// Critic update, Polyak averaging, then per-head policy and temperature
  /// updates, on one minibatch.
  GradientStats gradient_step(const Batch& batch, Rng& rng);

  void save(nn::Checkpoint& ck) const;

 private:
  TrainConfig config_;
  std::vector<double> weights_;
  dist::ActionBox box_;
  double target_entropy_;
  std::vector<nn::Tensor> log_alpha_;
  nn::Adam critic_opt_;
  std::unique_ptr<PolicyOptimizers> policy_opt_;
  std::vector<nn::Adam> alpha_opt_;
};

}  // namespace mixent::sacm
