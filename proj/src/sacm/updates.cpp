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

#include "mixent/sacm/updates.hpp"

#include <cmath>
#include <string>

#include "mixent/common/error.hpp"
#include "mixent/dist/mixture.hpp"

namespace mixent::sacm {

std::size_t select_component(std::span<const double> w, Rng& rng) {
  return dist::sample_index(w, rng);
}

ActResult act(const PolicyNet& policy, std::span<const double> obs, std::span<const double> w,
              const dist::ActionBox& box, Rng& rng, ActMode mode) {
  ActResult out;
  out.component = select_component(w, rng);
  const nn::Tensor features = policy.trunk.predict(nn::Tensor::row(obs));
  const nn::Tensor raw = policy.heads[out.component].predict(features);
  for (double x : raw.data()) {
    if (!std::isfinite(x)) throw NonFiniteError("policy head " + std::to_string(out.component) + " produced a non-finite output");
  }
  const std::size_t d = policy.action_dim;
  auto row = raw.row_span(0);
  const auto g = dist::DiagGaussian::make({row.begin(), row.begin() + d}, {row.begin() + d, row.end()});
  std::vector<double> eps(d, 0.0);
  if (mode == ActMode::kStochastic) rng.fill_normal(eps);
  out.action = dist::rsample(g, eps, box).action;
  return out;
}

double effective_alpha(std::span<const double> w, std::span<const double> alphas) {
  if (w.size() != alphas.size()) throw DimensionError("one temperature per mixture weight required");
  double a = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) a += w[i] * alphas[i];
  return a;
}

double s2acm_entropy_bonus(std::size_t i, std::span<const double> h, std::span<const double> w) {
  if (h.size() != w.size() || i >= w.size()) throw DimensionError("s2acm bonus: index or sizes out of range");
  double num = 0.0;
  double mass = 0.0;
  for (std::size_t j = 0; j <= i; ++j) {
    num += w[j] * h[j];
    mass += w[j];
  }
  if (mass <= 0.0) return 0.0;
  return num / mass;
}

TargetNoise draw_target_noise(std::size_t batch, std::size_t action_dim, std::span<const double> w,
                              Rng& rng) {
  TargetNoise noise;
  noise.component.resize(batch);
  for (auto& c : noise.component) c = select_component(w, rng);
  for (std::size_t i = 0; i < w.size(); ++i) {
    nn::Tensor e = nn::Tensor::matrix(batch, action_dim);
    rng.fill_normal(e.data());
    noise.eps.push_back(std::move(e));
  }
  return noise;
}

nn::Tensor critic_target(const Batch& batch, const PolicyNet& policy, const CriticNet& critic,
                         const TargetContext& ctx, const TargetNoise& noise) {
  const std::size_t B = batch.size();
  const std::size_t N = policy.size();
  const std::size_t d = policy.action_dim;
  if (critic.heads() != N || ctx.weights.size() != N || noise.eps.size() != N ||
      noise.component.size() != B) {
    throw DimensionError("critic_target: head counts, weights and noise disagree");
  }
  auto heads = policy.distributions(batch.s2);

  // Per-row mixtures over next states.
  std::vector<dist::MixtureSpec> mix(B);
  for (std::size_t r = 0; r < B; ++r) {
    mix[r].weights = ctx.weights;
    for (std::size_t i = 0; i < N; ++i) mix[r].components.push_back(heads[i][r]);
  }

  nn::Tensor y = nn::Tensor::matrix(B, N);
  auto bootstrap = [&](std::size_t r, double v) {
    return batch.r(r, 0) + ctx.gamma * (1.0 - batch.done(r, 0)) * v;
  };

  if (ctx.variant == Variant::kSacm) {
    nn::Tensor a2 = nn::Tensor::matrix(B, d);
    std::vector<double> log_mix(B);
    for (std::size_t r = 0; r < B; ++r) {
      const std::size_t c = noise.component[r];
      const auto sample = dist::rsample(heads[c][r], noise.eps[c].row_span(r), ctx.box);
      std::copy(sample.action.begin(), sample.action.end(), a2.row_span(r).begin());
      log_mix[r] = dist::mixture_log_prob(mix[r], sample.action, ctx.box);
    }
    const nn::Tensor qbar = critic.q_target(batch.s2, a2);
    for (std::size_t r = 0; r < B; ++r) {
      double q = 0.0;
      for (std::size_t i = 0; i < N; ++i) q += ctx.weights[i] * qbar(r, i);
      const double v = bootstrap(r, q - ctx.alpha_eff * log_mix[r]);
      for (std::size_t i = 0; i < N; ++i) y(r, i) = v;
    }
    return y;
  }

  // s2acm: every head draws its own next action.
  nn::Tensor s2_rep = nn::Tensor::matrix(N * B, batch.s2.cols());
  nn::Tensor a2 = nn::Tensor::matrix(N * B, d);
  std::vector<double> h(N * B);  // h[i * B + r] = -log pi(a'_i | s'_r)
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t r = 0; r < B; ++r) {
      const auto sample = dist::rsample(heads[i][r], noise.eps[i].row_span(r), ctx.box);
      std::copy(sample.action.begin(), sample.action.end(), a2.row_span(i * B + r).begin());
      auto src = batch.s2.row_span(r);
      std::copy(src.begin(), src.end(), s2_rep.row_span(i * B + r).begin());
      h[i * B + r] = -dist::mixture_log_prob(mix[r], sample.action, ctx.box);
    }
  }
  const nn::Tensor qbar = critic.q_target(s2_rep, a2);
  std::vector<double> row_h(N);
  for (std::size_t r = 0; r < B; ++r) {
    for (std::size_t j = 0; j < N; ++j) row_h[j] = h[j * B + r];
    for (std::size_t i = 0; i < N; ++i) {
      const double bonus = s2acm_entropy_bonus(i, row_h, ctx.weights);
      y(r, i) = bootstrap(r, qbar(i * B + r, i) + ctx.alpha_eff * bonus);
    }
  }
  return y;
}

nn::Tensor critic_loss_weights(const Batch& batch, std::size_t heads, CriticData mode) {
  const std::size_t B = batch.size();
  nn::Tensor w = nn::Tensor::matrix(B, heads);
  if (mode == CriticData::kShared || heads == 1) {
    w.fill(1.0 / static_cast<double>(B));
    return w;
  }
  std::vector<std::size_t> count(heads, 0);
  for (auto h : batch.head) {
    if (h >= heads) throw DimensionError("bootstrap head id out of range");
    ++count[h];
  }
  for (std::size_t r = 0; r < B; ++r) {
    const auto h = batch.head[r];
    w(r, h) = 1.0 / static_cast<double>(count[h]);
  }
  return w;
}

nn::Var critic_loss(nn::Graph& g, const nn::Mlp& critic, const Batch& batch, const nn::Tensor& y,
                    const nn::Tensor& weights, nn::Binding* binding) {
  const nn::Var x = g.constant(CriticNet::join(batch.s, batch.a));
  const nn::Var q = critic.forward(g, x, nn::ParamMode::kTrainable, binding);
  if (!g.value(q).same_shape(y) || !y.same_shape(weights)) {
    throw DimensionError("critic_loss: Q " + g.value(q).shape_string() + " vs targets " + y.shape_string());
  }
  const nn::Var err = g.sub(q, g.constant(y));
  const nn::Var weighted = g.mul(g.square(err), g.constant(weights));
  return g.scale(g.sum(weighted), 0.5 / static_cast<double>(y.cols()));
}

namespace {

std::vector<const nn::Tensor*> collect(const nn::Gradients& grads, const nn::Binding& b) {
  std::vector<const nn::Tensor*> out;
  out.reserve(b.params.size());
  for (const auto& v : b.params) out.push_back(grads.contains(v) ? &grads.at(v) : nullptr);
  return out;
}

}  // namespace

double critic_update(nn::Mlp& critic, nn::Adam& opt, const Batch& batch, const nn::Tensor& y,
                     CriticData mode) {
  nn::Graph g;
  nn::Binding binding;
  const nn::Var loss = critic_loss(g, critic, batch, y, critic_loss_weights(batch, y.cols(), mode), &binding);
  const auto grads = g.backward(loss);
  opt.step(collect(grads, binding));
  return g.value(loss).item();
}

PolicyLossNodes policy_loss(nn::Graph& g, const PolicyNet& policy, const nn::Mlp& critic,
                            const nn::Tensor& s, const std::vector<nn::Tensor>& eps,
                            std::span<const double> alphas, const dist::ActionBox& box,
                            nn::ParamMode policy_mode) {
  const std::size_t N = policy.size();
  const std::size_t B = s.rows();
  if (eps.size() != N || alphas.size() != N || critic.output_width() != N) {
    throw DimensionError("policy_loss: head counts disagree");
  }
  PolicyLossNodes out;
  const nn::Var obs = g.constant(s);
  out.policy = policy.forward(g, obs, policy_mode);

  std::vector<nn::Var> inputs;
  for (std::size_t i = 0; i < N; ++i) {
    const auto sample = dist::rsample(g, out.policy.outputs[i], eps[i], box);
    out.log_prob.push_back(sample.log_prob);
    inputs.push_back(g.concat_cols({obs, sample.action}));
  }
  // All heads' actions go through the critic in one pass.
  const nn::Var x = N == 1 ? inputs.front() : g.concat_rows(inputs);
  const nn::Var q = critic.forward(g, x, nn::ParamMode::kFrozen);
  for (std::size_t i = 0; i < N; ++i) {
    const nn::Var qi = g.slice_cols(N == 1 ? q : g.slice_rows(q, i * B, (i + 1) * B), i, i + 1);
    const nn::Var obj = g.sub(g.scale(out.log_prob[i], alphas[i]), qi);
    out.head_loss.push_back(g.mean(obj));
  }
  out.total = out.head_loss.front();
  for (std::size_t i = 1; i < N; ++i) out.total = g.add(out.total, out.head_loss[i]);
  return out;
}

PolicyOptimizers::PolicyOptimizers(PolicyNet& policy, const nn::AdamConfig& config)
    : trunk(policy.trunk.parameters(), policy.trunk.parameter_names("policy.trunk"), config) {
  for (std::size_t i = 0; i < policy.size(); ++i) {
    heads.emplace_back(policy.heads[i].parameters(),
                       policy.heads[i].parameter_names("policy.head" + std::to_string(i)), config);
  }
}

PolicyStepStats policy_update(PolicyNet& policy, PolicyOptimizers& opt, const nn::Mlp& critic,
                              const nn::Tensor& s, const std::vector<nn::Tensor>& eps,
                              std::span<const double> alphas, const dist::ActionBox& box) {
  nn::Graph g;
  const auto nodes = policy_loss(g, policy, critic, s, eps, alphas, box);
  const auto grads = g.backward(nodes.total);
  PolicyStepStats stats;
  for (std::size_t i = 0; i < policy.size(); ++i) {
    stats.loss.push_back(g.value(nodes.head_loss[i]).item());
    const auto& lp = g.value(nodes.log_prob[i]);
    double m = 0.0;
    for (double x : lp.data()) m += x;
    stats.mean_log_prob.push_back(m / static_cast<double>(lp.size()));
  }
  opt.trunk.step(collect(grads, nodes.policy.trunk));
  for (std::size_t i = 0; i < policy.size(); ++i) opt.heads[i].step(collect(grads, nodes.policy.heads[i]));
  return stats;
}

double alpha_gradient(double mean_log_prob, double target_entropy) {
  return -mean_log_prob - target_entropy;
}

double alpha_update(nn::Tensor& log_alpha, nn::Adam& opt, double mean_log_prob,
                    double target_entropy) {
  const nn::Tensor grad = nn::Tensor::scalar(alpha_gradient(mean_log_prob, target_entropy));
  opt.step({&grad});
  return std::exp(log_alpha.item());
}

Agent::Agent(const TrainConfig& config, std::size_t obs_dim, const dist::ActionBox& box, Rng& rng)
    : config_(config),
      weights_(config.mixture_weights()),
      box_(box),
      target_entropy_(config.resolved_target_entropy(box.dim())) {
  config.validate();
  policy = PolicyNet::make(obs_dim, box.dim(), config.n, config.hidden, rng);
  critic = CriticNet::make(obs_dim, box.dim(), config.n, config.hidden, rng);
  const nn::AdamConfig adam{config.lr};
  critic_opt_ = nn::Adam(critic.online.parameters(), critic.online.parameter_names("critic"), adam);
  policy_opt_ = std::make_unique<PolicyOptimizers>(policy, adam);
  log_alpha_.reserve(config.n);
  alpha_opt_.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    log_alpha_.push_back(nn::Tensor::scalar(std::log(config.alpha_init)));
    alpha_opt_.emplace_back(std::vector<nn::Tensor*>{&log_alpha_.back()},
                            std::vector<std::string>{"log_alpha" + std::to_string(i)}, adam);
  }
}

std::vector<double> Agent::alphas() const {
  std::vector<double> a;
  for (const auto& t : log_alpha_) a.push_back(std::exp(t.item()));
  return a;
}

GradientStats Agent::gradient_step(const Batch& batch, Rng& rng) {
  const std::size_t N = policy.size();
  GradientStats stats;
  const TargetContext ctx{weights_, config_.gamma, alpha_eff(), config_.variant, box_};
  const auto noise = draw_target_noise(batch.size(), box_.dim(), weights_, rng);
  const nn::Tensor y = critic_target(batch, policy, critic, ctx, noise);
  stats.critic_loss = critic_update(critic.online, critic_opt_, batch, y, config_.critic_data);
  polyak(critic.target, critic.online, config_.tau);

  std::vector<nn::Tensor> eps;
  for (std::size_t i = 0; i < N; ++i) {
    nn::Tensor e = nn::Tensor::matrix(batch.size(), box_.dim());
    rng.fill_normal(e.data());
    eps.push_back(std::move(e));
  }
  const auto alphas_now = alphas();
  const auto p = policy_update(policy, *policy_opt_, critic.online, batch.s, eps, alphas_now, box_);
  stats.policy_loss = p.loss;
  for (std::size_t i = 0; i < N; ++i) {
    stats.head_entropy.push_back(-p.mean_log_prob[i]);
    stats.alpha.push_back(alpha_update(log_alpha_[i], alpha_opt_[i], p.mean_log_prob[i], target_entropy_));
  }
  return stats;
}

void Agent::save(nn::Checkpoint& ck) const {
  policy.save(ck, "policy");
  ck.add_mlp("critic", critic.online);
  ck.add_mlp("critic_target", critic.target);
  for (std::size_t i = 0; i < log_alpha_.size(); ++i) ck.add("log_alpha" + std::to_string(i), log_alpha_[i]);
}

}  // namespace mixent::sacm
