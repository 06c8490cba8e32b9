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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "mixent/common/error.hpp"
#include "mixent/common/log.hpp"
#include "mixent/common/rng.hpp"
#include "mixent/entropy/estimators.hpp"
#include "mixent/envs/bandit.hpp"
#include "mixent/envs/pendulum.hpp"
#include "mixent/sacm/config.hpp"
#include "mixent/sacm/metrics.hpp"
#include "mixent/sacm/networks.hpp"
#include "mixent/sacm/replay.hpp"
#include "mixent/sacm/trainer.hpp"
#include "mixent/sacm/updates.hpp"
#include "test_util.hpp"

namespace mixent::sacm {
namespace {

using nn::Activation;
using nn::Layer;
using nn::Mlp;
using nn::Tensor;

const dist::ActionBox kUnit = dist::ActionBox::symmetric(1, 1.0);

// obs (1) -> relu trunk (2) -> per-head linear (mean, log_std).
PolicyNet tiny_policy(const std::vector<std::array<double, 6>>& heads) {
  PolicyNet p;
  p.action_dim = 1;
  p.trunk = Mlp({Layer{Tensor::from_rows({{0.8, -0.5}}), Tensor::from_rows({{0.1, 0.6}}), Activation::kRelu}});
  for (const auto& h : heads) {
    p.heads.push_back(Mlp({Layer{Tensor::from_rows({{h[0], h[1]}, {h[2], h[3]}}),
                                 Tensor::from_rows({{h[4], h[5]}}), Activation::kIdentity}}));
  }
  return p;
}

// [s, a] -> N linear outputs.
Mlp linear_critic(const std::vector<std::array<double, 3>>& cols) {
  Tensor w = Tensor::matrix(2, cols.size());
  Tensor b = Tensor::matrix(1, cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    w(0, i) = cols[i][0];
    w(1, i) = cols[i][1];
    b(0, i) = cols[i][2];
  }
  return Mlp({Layer{w, b, Activation::kIdentity}});
}

Batch two_transition_batch() {
  Batch b;
  b.s = Tensor::from_rows({{0.2}, {-0.4}});
  b.a = Tensor::from_rows({{0.1}, {-0.3}});
  b.r = Tensor::from_rows({{0.5}, {-1.0}});
  b.s2 = Tensor::from_rows({{0.7}, {1.1}});
  b.done = Tensor::from_rows({{0.0}, {1.0}});
  b.head = {0, 1};
  return b;
}

// Hand evaluation of the same tiny networks, written out with scalar math.
struct HandHead {
  double mean, log_std;
};

HandHead hand_head(double s, const std::array<double, 6>& h) {
  const double f0 = std::max(0.0, 0.8 * s + 0.1);
  const double f1 = std::max(0.0, -0.5 * s + 0.6);
  return {f0 * h[0] + f1 * h[2] + h[4], std::clamp(f0 * h[1] + f1 * h[3] + h[5], -20.0, 2.0)};
}

double hand_log_density(const HandHead& g, double a) {
  const double u = std::atanh(a);
  const double z = (u - g.mean) / std::exp(g.log_std);
  return -0.5 * z * z - g.log_std - 0.5 * std::log(2 * M_PI) - std::log(1 - std::tanh(u) * std::tanh(u));
}

TEST(SelectComponent, Examples) {
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    EXPECT_EQ(select_component(std::vector<double>{1.0}, rng), 0u);
    EXPECT_EQ(select_component(std::vector<double>{0.0, 1.0}, rng), 1u);
  }
  const std::size_t n = 100000;
  std::size_t ones = 0;
  for (std::size_t k = 0; k < n; ++k) ones += select_component(std::vector<double>{0.3, 0.7}, rng);
  EXPECT_LE(std::abs(double(ones) / n - 0.7), 3 * std::sqrt(0.21 / n));
}

TEST(Act, DeterministicIsReproducible) {
  const PolicyNet p = tiny_policy({{0.4, 0.1, -0.3, 0.2, 0.05, -0.5}});
  const std::vector<double> s{0.3};
  const std::vector<double> w{1.0};
  Rng r1(1), r2(2);
  const auto a = act(p, s, w, kUnit, r1, ActMode::kDeterministic);
  const auto b = act(p, s, w, kUnit, r2, ActMode::kDeterministic);
  EXPECT_EQ(a.action, b.action);
  EXPECT_NEAR(a.action[0], std::tanh(hand_head(0.3, {0.4, 0.1, -0.3, 0.2, 0.05, -0.5}).mean), 1e-15);
}

TEST(Act, StochasticActionsInsideBox) {
  Rng rng(3);
  const PolicyNet p = PolicyNet::make(3, 2, 3, {8}, rng);
  const dist::ActionBox box = dist::ActionBox::symmetric(2, 2.0);
  const std::vector<double> w{0.2, 0.3, 0.5};
  for (int k = 0; k < 2000; ++k) {
    const auto s = rng.normal_vector(3);
    const auto a = act(p, s, w, box, rng, ActMode::kStochastic);
    EXPECT_TRUE(box.contains(a.action));
    EXPECT_LT(a.component, 3u);
    for (double x : a.action) EXPECT_LT(std::abs(x), 2.0);
  }
}

// Kolmogorov-Smirnov test of sampled actions against the mixture CDF.
TEST(Act, ActionDistributionMatchesMixture) {
  const PolicyNet p = tiny_policy({{0.0, 0.0, 0.0, 0.0, -0.9, -1.0}, {0.0, 0.0, 0.0, 0.0, 0.7, -0.5}});
  const std::vector<double> s{0.0};
  const std::vector<double> w{0.4, 0.6};
  Rng rng(4);
  const std::size_t n = 20000;
  std::vector<double> a(n);
  for (auto& x : a) x = act(p, s, w, kUnit, rng, ActMode::kStochastic).action[0];
  std::sort(a.begin(), a.end());
  auto cdf = [&](double x) {
    const double u = std::atanh(x);
    auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    return 0.4 * phi((u + 0.9) / std::exp(-1.0)) + 0.6 * phi((u - 0.7) / std::exp(-0.5));
  };
  double d = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double f = cdf(a[k]);
    d = std::max({d, std::abs(f - double(k) / n), std::abs(double(k + 1) / n - f)});
  }
  EXPECT_LT(d, 1.628 / std::sqrt(double(n)));
}

TEST(EffectiveAlpha, WeightedSum) {
  EXPECT_NEAR(effective_alpha(std::vector<double>{0.25, 0.75}, std::vector<double>{2.0, 0.4}), 0.8, 1e-15);
  EXPECT_THROW(effective_alpha(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}), DimensionError);
}

TEST(CriticTarget, TerminalAndZeroDiscountGiveReward) {
  const PolicyNet p = tiny_policy({{0.4, 0.1, -0.3, 0.2, 0.05, -0.5}, {-0.2, 0.3, 0.1, -0.1, 0.2, -0.2}});
  CriticNet c;
  c.online = c.target = linear_critic({{0.5, 1.5, 0.2}, {-0.3, 0.8, 0.1}});
  Batch b = two_transition_batch();
  b.done.fill(1.0);
  Rng rng(5);
  const auto noise = draw_target_noise(2, 1, std::vector<double>{0.5, 0.5}, rng);
  for (Variant v : {Variant::kSacm, Variant::kS2acm}) {
    TargetContext ctx{{0.5, 0.5}, 0.99, 0.7, v, kUnit};
    Tensor y = critic_target(b, p, c, ctx, noise);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(y(r, i), b.r(r, 0));
    b.done.fill(0.0);
    ctx.gamma = 0.0;
    y = critic_target(b, p, c, ctx, noise);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(y(r, i), b.r(r, 0));
    b.done.fill(1.0);
  }
}

const std::array<double, 6> kHeadA{0.4, 0.1, -0.3, 0.2, 0.05, -0.5};
const std::array<double, 6> kHeadB{-0.2, 0.3, 0.1, -0.1, 0.2, -0.2};

TEST(CriticTarget, SingleHeadMatchesHandCalculation) {
  const PolicyNet p = tiny_policy({kHeadA});
  CriticNet c;
  c.online = linear_critic({{9.0, 9.0, 9.0}});  // must not be used
  c.target = linear_critic({{0.5, 1.5, 0.2}});
  const Batch b = two_transition_batch();
  TargetNoise noise{{0, 0}, {Tensor::from_rows({{0.3}, {-1.2}})}};
  const TargetContext ctx{{1.0}, 0.9, 0.7, Variant::kSacm, kUnit};
  const Tensor y = critic_target(b, p, c, ctx, noise);
  for (std::size_t r = 0; r < 2; ++r) {
    const double s2 = b.s2(r, 0);
    const HandHead h = hand_head(s2, kHeadA);
    const double a = std::tanh(h.mean + noise.eps[0](r, 0) * std::exp(h.log_std));
    const double q = 0.5 * s2 + 1.5 * a + 0.2;
    const double want = b.r(r, 0) + 0.9 * (1 - b.done(r, 0)) * (q - 0.7 * hand_log_density(h, a));
    EXPECT_NEAR(y(r, 0), want, 1e-12);
  }
  // The same transition under the per-head variant is the same target for one head.
  TargetContext s2 = ctx;
  s2.variant = Variant::kS2acm;
  const Tensor y2 = critic_target(b, p, c, s2, noise);
  for (std::size_t r = 0; r < 2; ++r) EXPECT_NEAR(y2(r, 0), y(r, 0), 1e-12);
}

TEST(CriticTarget, TwoHeadMixtureMatchesHandCalculation) {
  const PolicyNet p = tiny_policy({kHeadA, kHeadB});
  CriticNet c;
  c.target = linear_critic({{0.5, 1.5, 0.2}, {-0.3, 0.8, 0.1}});
  c.online = c.target;
  Batch b = two_transition_batch();
  b.done.fill(0.0);
  const std::vector<double> w{0.3, 0.7};
  TargetNoise noise{{1, 0}, {Tensor::from_rows({{0.3}, {-1.2}}), Tensor::from_rows({{0.9}, {0.1}})}};
  const double alpha = 0.45;

  auto mix_logp = [&](double s2, double a) {
    const double p0 = std::exp(hand_log_density(hand_head(s2, kHeadA), a));
    const double p1 = std::exp(hand_log_density(hand_head(s2, kHeadB), a));
    return std::log(w[0] * p0 + w[1] * p1);
  };
  auto sample = [&](double s2, std::size_t head, std::size_t r) {
    const HandHead h = hand_head(s2, head == 0 ? kHeadA : kHeadB);
    return std::tanh(h.mean + noise.eps[head](r, 0) * std::exp(h.log_std));
  };
  auto qbar = [&](double s2, double a, std::size_t i) {
    return i == 0 ? 0.5 * s2 + 1.5 * a + 0.2 : -0.3 * s2 + 0.8 * a + 0.1;
  };

  const Tensor y = critic_target(b, p, c, {w, 0.9, alpha, Variant::kSacm, kUnit}, noise);
  for (std::size_t r = 0; r < 2; ++r) {
    const double s2 = b.s2(r, 0);
    const double a = sample(s2, noise.component[r], r);
    const double q = w[0] * qbar(s2, a, 0) + w[1] * qbar(s2, a, 1);
    const double want = b.r(r, 0) + 0.9 * (q - alpha * mix_logp(s2, a));
    EXPECT_NEAR(y(r, 0), want, 1e-12);
    EXPECT_NEAR(y(r, 1), want, 1e-12);
  }

  const Tensor ys = critic_target(b, p, c, {w, 0.9, alpha, Variant::kS2acm, kUnit}, noise);
  for (std::size_t r = 0; r < 2; ++r) {
    const double s2 = b.s2(r, 0);
    const double a0 = sample(s2, 0, r);
    const double a1 = sample(s2, 1, r);
    const double h0 = -mix_logp(s2, a0);
    const double h1 = -mix_logp(s2, a1);
    EXPECT_NEAR(ys(r, 0), b.r(r, 0) + 0.9 * (qbar(s2, a0, 0) + alpha * h0), 1e-12);
    EXPECT_NEAR(ys(r, 1), b.r(r, 0) + 0.9 * (qbar(s2, a1, 1) + alpha * (w[0] * h0 + w[1] * h1)), 1e-12);
  }
}

TEST(CriticUpdate, ZeroLossWhenQEqualsTarget) {
  Rng rng(6);
  Mlp critic = Mlp::make({2, 4, 1}, Activation::kRelu, Activation::kIdentity, rng);
  const Batch b = two_transition_batch();
  const Tensor y = critic.predict(CriticNet::join(b.s, b.a));
  nn::Graph g;
  nn::Binding binding;
  const auto loss = critic_loss(g, critic, b, y, critic_loss_weights(b, 1, CriticData::kShared), &binding);
  EXPECT_EQ(g.value(loss).item(), 0.0);
  const auto grads = g.backward(loss);
  for (const auto& v : binding.params) {
    if (!grads.contains(v)) continue;
    for (double x : grads.at(v).data()) EXPECT_EQ(x, 0.0);
  }
}

TEST(CriticUpdate, LinearCriticGradientIsResidualTimesInput) {
  const Mlp critic = linear_critic({{0.5, -1.5, 0.2}});
  Batch b = two_transition_batch();
  b.s = Tensor::from_rows({{0.3}});
  b.a = Tensor::from_rows({{-0.7}});
  b.head = {0};
  const Tensor y = Tensor::from_rows({{2.0}});
  nn::Graph g;
  nn::Binding binding;
  const auto loss = critic_loss(g, critic, b, y, critic_loss_weights(b, 1, CriticData::kShared), &binding);
  const auto grads = g.backward(loss);
  const double q = 0.5 * 0.3 - 1.5 * -0.7 + 0.2;
  EXPECT_NEAR(g.value(loss).item(), 0.5 * (q - 2.0) * (q - 2.0), 1e-15);
  EXPECT_NEAR(grads.at(binding.params[0])(0, 0), (q - 2.0) * 0.3, 1e-15);
  EXPECT_NEAR(grads.at(binding.params[0])(1, 0), (q - 2.0) * -0.7, 1e-15);
  EXPECT_NEAR(grads.at(binding.params[1])(0, 0), q - 2.0, 1e-15);
}

TEST(CriticUpdate, LossDecreasesOnFrozenBatch) {
  Rng rng(7);
  Mlp critic = Mlp::make({3, 16, 2}, Activation::kRelu, Activation::kIdentity, rng);
  nn::Adam opt(critic.parameters(), critic.parameter_names("critic"), nn::AdamConfig{1e-2});
  Batch b;
  b.s = test::random_tensor(32, 2, rng);
  b.a = test::random_tensor(32, 1, rng);
  b.r = b.done = Tensor::matrix(32, 1);
  b.s2 = b.s;
  b.head.assign(32, 0);
  for (std::size_t r = 16; r < 32; ++r) b.head[r] = 1;
  const Tensor y = test::random_tensor(32, 2, rng);
  const double first = critic_update(critic, opt, b, y, CriticData::kBootstrap);
  double last = first;
  for (int k = 0; k < 99; ++k) last = critic_update(critic, opt, b, y, CriticData::kBootstrap);
  EXPECT_LT(last, 0.5 * first);
}

TEST(CriticUpdate, BootstrapWeightsMaskOtherHeads) {
  Batch b = two_transition_batch();
  b.head = {1, 1};
  const Tensor w = critic_loss_weights(b, 2, CriticData::kBootstrap);
  EXPECT_EQ(w(0, 0), 0.0);
  EXPECT_EQ(w(1, 0), 0.0);
  EXPECT_EQ(w(0, 1), 0.5);
  EXPECT_EQ(w(1, 1), 0.5);
  const Tensor s = critic_loss_weights(b, 2, CriticData::kShared);
  for (double x : s.data()) EXPECT_EQ(x, 0.5);
}

TEST(PolicyUpdate, ZeroGradientWhenObjectiveConstant) {
  PolicyNet p = tiny_policy({kHeadA});
  const Mlp critic = linear_critic({{0.7, 0.0, 0.1}});  // Q independent of a
  const Tensor s = Tensor::from_rows({{0.2}, {-0.3}});
  const std::vector<Tensor> eps{Tensor::from_rows({{0.4}, {-0.8}})};
  nn::Graph g;
  const auto nodes = policy_loss(g, p, critic, s, eps, std::vector<double>{0.0}, kUnit);
  const auto grads = g.backward(nodes.total);
  for (const auto* b : {&nodes.policy.trunk, &nodes.policy.heads[0]}) {
    for (const auto& v : b->params) {
      if (!grads.contains(v)) continue;
      for (double x : grads.at(v).data()) EXPECT_NEAR(x, 0.0, 1e-15);
    }
  }
}

// Fits a critic to Q(s, a) = -(a - 0.3)^2, then runs the policy update with alpha = 0.
TEST(PolicyUpdate, ConvergesToQuadraticOptimum) {
  Rng rng(8);
  Mlp critic = Mlp::make({2, 32, 32, 1}, Activation::kTanh, Activation::kIdentity, rng);
  {
    nn::Adam opt(critic.parameters(), critic.parameter_names("critic"), nn::AdamConfig{3e-3});
    const std::size_t n = 256;
    Batch b;
    b.s = Tensor::matrix(n, 1);
    b.a = Tensor::matrix(n, 1);
    Tensor y = Tensor::matrix(n, 1);
    for (std::size_t r = 0; r < n; ++r) {
      b.s(r, 0) = -1.0 + 2.0 * r / (n - 1.0);
      b.a(r, 0) = -1.0 + 2.0 * ((r * 37) % n) / (n - 1.0);
      y(r, 0) = -(b.a(r, 0) - 0.3) * (b.a(r, 0) - 0.3);
    }
    b.head.assign(n, 0);
    for (int k = 0; k < 3000; ++k) critic_update(critic, opt, b, y, CriticData::kShared);
  }
  PolicyNet p = PolicyNet::make(1, 1, 1, {4}, rng);
  PolicyOptimizers opt(p, nn::AdamConfig{3e-3});
  const Tensor s = Tensor::from_rows({{0.0}});
  for (int k = 0; k < 2000; ++k) {
    std::vector<Tensor> eps{Tensor::from_rows({{rng.normal()}})};
    policy_update(p, opt, critic, s, eps, std::vector<double>{0.0}, kUnit);
  }
  const auto g = p.distributions(s)[0][0];
  EXPECT_NEAR(std::tanh(g.mean[0]), 0.3, 1e-2);
}

TEST(PolicyUpdate, GradientsMatchFiniteDifferences) {
  Rng rng(9);
  PolicyNet p = PolicyNet::make(2, 1, 2, {4}, rng);
  const Mlp critic = Mlp::make({3, 4, 2}, Activation::kTanh, Activation::kIdentity, rng);
  const Tensor s = test::random_tensor(5, 2, rng);
  const std::vector<Tensor> eps{test::random_tensor(5, 1, rng), test::random_tensor(5, 1, rng)};
  const std::vector<double> alphas{0.3, 0.8};

  nn::Graph g;
  const auto nodes = policy_loss(g, p, critic, s, eps, alphas, kUnit);
  const auto grads = g.backward(nodes.total);
  auto value = [&] {
    nn::Graph h;
    return h.value(policy_loss(h, p, critic, s, eps, alphas, kUnit).total).item();
  };

  std::vector<std::pair<Tensor*, nn::Var>> all;
  auto tp = p.trunk.parameters();
  for (std::size_t k = 0; k < tp.size(); ++k) all.emplace_back(tp[k], nodes.policy.trunk.params[k]);
  for (std::size_t i = 0; i < 2; ++i) {
    auto hp = p.heads[i].parameters();
    for (std::size_t k = 0; k < hp.size(); ++k) all.emplace_back(hp[k], nodes.policy.heads[i].params[k]);
  }
  double worst = 0.0;
  for (auto& [param, var] : all) {
    Tensor numeric(param->shape());
    for (std::size_t k = 0; k < param->size(); ++k) {
      const double saved = (*param)[k];
      (*param)[k] = saved + 1e-6;
      const double up = value();
      (*param)[k] = saved - 1e-6;
      const double down = value();
      (*param)[k] = saved;
      numeric[k] = (up - down) / 2e-6;
    }
    const Tensor analytic = grads.contains(var) ? grads.at(var) : Tensor(param->shape());
    worst = std::max(worst, test::max_rel_error(analytic, numeric));
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(PolicyUpdate, CriticReceivesNoGradient) {
  Rng rng(10);
  const PolicyNet p = PolicyNet::make(2, 1, 2, {4}, rng);
  const Mlp critic = Mlp::make({3, 4, 2}, Activation::kTanh, Activation::kIdentity, rng);
  nn::Graph g;
  const auto nodes = policy_loss(g, p, critic, test::random_tensor(3, 2, rng),
                                 {test::random_tensor(3, 1, rng), test::random_tensor(3, 1, rng)},
                                 std::vector<double>{0.1, 0.1}, kUnit);
  const auto grads = g.backward(nodes.total);
  // Only policy parameters are trainable leaves in this graph.
  std::size_t policy_params = 0;
  for (const auto* b : {&nodes.policy.trunk, &nodes.policy.heads[0], &nodes.policy.heads[1]})
    policy_params += b->params.size();
  EXPECT_EQ(grads.size() >= policy_params, true);
  for (std::size_t id = 0; id < g.size(); ++id) {
    const nn::Var v{id};
    if (g.op(v) == nn::OpKind::kLeaf && g.requires_grad(v)) {
      bool owned = false;
      for (const auto* b : {&nodes.policy.trunk, &nodes.policy.heads[0], &nodes.policy.heads[1]})
        for (const auto& q : b->params) owned |= q.id == id;
      EXPECT_TRUE(owned) << "unexpected trainable leaf " << id;
    }
  }
}

TEST(Alpha, FixedPointAndSign) {
  EXPECT_EQ(alpha_gradient(-0.5, 0.5), 0.0);
  Tensor log_alpha = Tensor::scalar(0.0);
  nn::Adam opt({&log_alpha}, {"log_alpha"});
  EXPECT_EQ(alpha_update(log_alpha, opt, -0.5, 0.5), 1.0);
  // Entropy (1.2) above the target (0.5): temperature goes down.
  const double a = alpha_update(log_alpha, opt, -1.2, 0.5);
  EXPECT_LT(a, 1.0);
  const double b = alpha_update(log_alpha, opt, 0.2, 0.5);
  EXPECT_GT(b, a);
}

TEST(Polyak, Examples) {
  Mlp online = linear_critic({{1.0, 1.0, 1.0}});
  Mlp target = linear_critic({{0.0, 0.0, 0.0}});
  Mlp copy = target;
  polyak(copy, online, 0.0);
  EXPECT_EQ(copy.layers()[0].weight(0, 0), 0.0);
  polyak(copy, online, 1.0);
  EXPECT_EQ(copy.layers()[0].weight(0, 0), 1.0);
  for (int k = 0; k < 3; ++k) polyak(target, online, 0.005);
  for (const Tensor* t : target.parameters())
    for (double x : t->data()) EXPECT_NEAR(x, 0.014925125, 1e-15);
  Mlp other = linear_critic({{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}});
  EXPECT_THROW(polyak(other, online, 0.5), DimensionError);
}

TEST(S2acmBonus, PartialSums) {
  const std::vector<double> h{1.3, -0.4, 2.2, 0.9};
  const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  EXPECT_NEAR(s2acm_entropy_bonus(0, h, w), 1.3, 1e-15);
  const std::vector<double> u(4, 0.25);
  EXPECT_NEAR(s2acm_entropy_bonus(3, h, u), 0.25 * (1.3 - 0.4 + 2.2 + 0.9), 1e-15);
  Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> hh(5), ww(5);
    double tot = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
      hh[j] = rng.normal();
      tot += (ww[j] = rng.uniform() + 0.01);
    }
    for (double& x : ww) x /= tot;
    const std::size_t i = rng.index(5);
    double num = 0.0, mass = 0.0;
    for (std::size_t j = 0; j <= i; ++j) {
      num += ww[j] * hh[j];
      mass += ww[j];
    }
    EXPECT_NEAR(s2acm_entropy_bonus(i, hh, ww), num / mass, 1e-14);
  }
  // The full sum is the one-sample mixture estimator built from the same values.
  entropy::LogDensityMatrix ld(2);
  ld(0, 0) = -0.3; ld(0, 1) = -1.7; ld(1, 0) = -2.1; ld(1, 1) = -0.6;
  const std::vector<double> w2{0.35, 0.65};
  const std::vector<double> h2{entropy::mixed_marginal_entropy(w2, ld, 0), entropy::mixed_marginal_entropy(w2, ld, 1)};
  EXPECT_NEAR(s2acm_entropy_bonus(1, h2, w2), entropy::sampled_estimator(w2, ld), 1e-15);
}

// With one head the mixture updates are the single-component SAC updates.
TEST(Reduction, SingleHeadPolicyLossIsSacLoss) {
  Rng rng(12);
  const PolicyNet p = PolicyNet::make(2, 1, 1, {6}, rng);
  const Mlp critic = Mlp::make({3, 6, 1}, Activation::kRelu, Activation::kIdentity, rng);
  const Tensor s = test::random_tensor(7, 2, rng);
  const Tensor eps = test::random_tensor(7, 1, rng);
  nn::Graph g;
  const auto nodes = policy_loss(g, p, critic, s, {eps}, std::vector<double>{0.4}, kUnit);
  const auto heads = p.distributions(s)[0];
  double want = 0.0;
  for (std::size_t r = 0; r < 7; ++r) {
    const auto smp = dist::rsample(heads[r], eps.row_span(r), kUnit);
    const Tensor q = critic.predict(CriticNet::join(Tensor::row(s.row_span(r)), Tensor::row(smp.action)));
    want += 0.4 * smp.log_prob - q.item();
  }
  EXPECT_NEAR(g.value(nodes.total).item(), want / 7, 1e-12);
}

TEST(Agent, EffectiveAlphaTracksHeadTemperatures) {
  log::set_level(log::Level::kWarn);
  TrainConfig cfg;
  cfg.env = "bandit";
  cfg.n = 3;
  cfg.weights = {0.2, 0.3, 0.5};
  cfg.hidden = {8};
  cfg.batch = 16;
  Rng rng(13);
  Agent agent(cfg, 1, kUnit, rng);
  ReplayBuffer replay(64, 1, 1, 3);
  for (int k = 0; k < 64; ++k) {
    const double a = rng.uniform(-1, 1);
    replay.add({{1.0}, {a}, envs::bandit_reward(a), {1.0}, true}, rng);
  }
  for (int k = 0; k < 20; ++k) {
    const Mlp target_before = agent.critic.target;
    const auto stats = agent.gradient_step(replay.sample(16, rng), rng);
    EXPECT_TRUE(std::isfinite(stats.critic_loss));
    const auto al = agent.alphas();
    EXPECT_EQ(stats.alpha, al);
    EXPECT_NEAR(agent.alpha_eff(), 0.2 * al[0] + 0.3 * al[1] + 0.5 * al[2], 1e-15);
    // The target moves only by Polyak averaging toward the updated online net.
    Mlp expect = target_before;
    polyak(expect, agent.critic.online, cfg.tau);
    const auto a = expect.parameters();
    const auto b = agent.critic.target.parameters();
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k2 = 0; k2 < a[i]->size(); ++k2) EXPECT_EQ((*a[i])[k2], (*b[i])[k2]);
  }
}

TEST(Replay, RingBufferAndSampling) {
  Rng rng(14);
  ReplayBuffer buf(3, 1, 1, 2);
  EXPECT_THROW(buf.sample(1, rng), ContractError);
  for (int k = 0; k < 5; ++k) buf.add({{double(k)}, {0.0}, double(k), {0.0}, k == 4}, rng);
  EXPECT_EQ(buf.size(), 3u);
  std::vector<double> rewards;
  for (std::size_t i = 0; i < 3; ++i) rewards.push_back(buf.at(i).r);
  std::sort(rewards.begin(), rewards.end());
  EXPECT_EQ(rewards, (std::vector<double>{2.0, 3.0, 4.0}));
  EXPECT_THROW(buf.sample(4, rng), ContractError);
  const Batch b = buf.sample(3, rng);
  EXPECT_EQ(b.size(), 3u);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(b.s(r, 0), b.r(r, 0));
    EXPECT_EQ(b.done(r, 0), b.r(r, 0) == 4.0 ? 1.0 : 0.0);
    EXPECT_LT(b.head[r], 2u);
  }
  EXPECT_THROW(buf.add({{0.0, 1.0}, {0.0}, 0.0, {0.0}, false}, rng), DimensionError);
  EXPECT_THROW(buf.add({{0.0}, {0.0}, std::nan(""), {0.0}, false}, rng), DomainError);
}

TEST(Replay, BootstrapAssignmentIsBalanced) {
  Rng rng(15);
  ReplayBuffer buf(10000, 1, 1, 2);
  for (int k = 0; k < 10000; ++k) buf.add({{0.0}, {0.0}, 0.0, {0.0}, false}, rng);
  const Batch b = buf.sample(10000, rng);
  std::size_t ones = 0;
  for (auto h : b.head) ones += h;
  EXPECT_NEAR(double(ones) / 10000, 0.5, 0.03);
}

TEST(Config, DefaultsAndValidation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.mixture_weights(), std::vector<double>{1.0});
  EXPECT_NEAR(c.resolved_target_entropy(3), -std::log(3.0), 1e-15);
  c.set("target_entropy", "-2");
  EXPECT_EQ(c.resolved_target_entropy(3), -2.0);
  c.set("n", "2");
  c.set("weights", "0.3,0.6");
  try {
    c.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("weights"), std::string::npos);
  }
  EXPECT_THROW(c.set("no_such_key", "1"), ConfigError);
  EXPECT_THROW(c.set("gamma", "abc"), ConfigError);
  TrainConfig d;
  d.set("env", "nowhere");
  EXPECT_THROW(d.validate(), ConfigError);
}

TEST(Config, TextRoundTrip) {
  TrainConfig c;
  c.set("n", "3");
  c.set("variant", "s2acm");
  c.set("critic_data", "bootstrap");
  c.set("hidden", "32,16");
  c.set("stop_return", "-200");
  TrainConfig d;
  for (const auto& [k, v] : c.to_pairs()) d.set(k, v);
  EXPECT_EQ(c.to_text(), d.to_text());
  EXPECT_EQ(d.variant, Variant::kS2acm);
  EXPECT_EQ(d.hidden, (std::vector<std::size_t>{32, 16}));
}

TEST(Evaluate, DeterministicIsRepeatable) {
  Rng rng(16);
  const PolicyNet p = PolicyNet::make(3, 1, 2, {8}, rng);
  envs::Pendulum env;
  const std::vector<double> w{0.5, 0.5};
  const auto a = evaluate(p, w, env, 3, ActMode::kDeterministic, 42);
  const auto b = evaluate(p, w, env, 3, ActMode::kDeterministic, 42);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.returns, b.returns);
}

TEST(Evaluate, RandomInitPolicyOnBandit) {
  Rng rng(17);
  const PolicyNet p = PolicyNet::make(1, 1, 2, {32, 32}, rng);
  envs::Bandit env;
  const auto r = evaluate(p, std::vector<double>{0.5, 0.5}, env, 200, ActMode::kStochastic, 1);
  EXPECT_LT(r.mean, 0.5);
}

TEST(Evaluate, ScriptedOptimalBanditAction) {
  PolicyNet p;
  p.action_dim = 1;
  p.trunk = Mlp({Layer{Tensor::from_rows({{1.0}}), Tensor::from_rows({{0.0}}), Activation::kRelu}});
  p.heads.push_back(Mlp({Layer{Tensor::from_rows({{0.0, 0.0}}), Tensor::from_rows({{std::atanh(0.6), -5.0}}),
                               Activation::kIdentity}}));
  envs::Bandit env;
  const auto r = evaluate(p, std::vector<double>{1.0}, env, 10, ActMode::kDeterministic, 0);
  EXPECT_NEAR(r.mean, 1.0, 1e-12);
  EXPECT_EQ(r.std, 0.0);
}

TEST(Diagnose, IdenticalHeadsHaveZeroPairwiseKl) {
  Rng rng(18);
  PolicyNet p = PolicyNet::make(2, 1, 1, {4}, rng);
  p.heads.push_back(p.heads[0]);
  const auto d = diagnose(p, std::vector<double>{0.5, 0.5}, kUnit, test::random_tensor(16, 2, rng), rng);
  EXPECT_EQ(d.mean_pairwise_kl, 0.0);
  ASSERT_EQ(d.head_entropy.size(), 2u);
}

TEST(Metrics, HeaderLayout) {
  const auto h = metrics_header(2);
  const std::vector<std::string> want{"step", "block", "eval_return_mean", "eval_return_std", "critic_loss",
                                      "policy_loss_0", "policy_loss_1", "alpha_0", "alpha_1",
                                      "head_entropy_0", "head_entropy_1", "mean_pairwise_kl",
                                      "sampled_mixture_entropy"};
  EXPECT_EQ(h, want);
  BlockMetrics m;
  m.policy_loss = m.alpha = m.head_entropy = {0.0, 0.0};
  EXPECT_EQ(metrics_row(m).size(), want.size());
  EXPECT_TRUE(metrics_finite(m));
  m.critic_loss = std::nan("");
  EXPECT_FALSE(metrics_finite(m));
}

TEST(Train, ZeroStepsWritesOnlyInitialCheckpoint) {
  const auto dir = test::scratch_dir("zero_steps");
  TrainConfig c;
  c.env = "bandit";
  c.total_steps = 0;
  c.hidden = {8};
  const auto r = train(c, {dir, {}});
  EXPECT_TRUE(r.metrics.empty());
  EXPECT_EQ(r.env_steps, 0u);
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(dir / "checkpoints")) files.push_back(e.path().filename());
  EXPECT_EQ(files, std::vector<std::string>{"step-000000000.ckpt"});
  const auto csv = test::read_text(dir / "metrics.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
  std::filesystem::remove_all(dir);
}

TEST(Train, ShortRunIsDeterministicAndFinite) {
  log::set_level(log::Level::kWarn);
  TrainConfig c;
  c.env = "pendulum";
  c.n = 2;
  c.hidden = {16};
  c.batch = 32;
  c.total_steps = 400;
  c.rollout_block = 200;
  c.gradient_block = 20;
  c.eval_episodes = 1;
  const auto a = train(c);
  const auto b = train(c);
  ASSERT_EQ(a.metrics.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_TRUE(metrics_finite(a.metrics[k]));
    EXPECT_EQ(metrics_row(a.metrics[k]), metrics_row(b.metrics[k]));
  }
  EXPECT_EQ(a.metrics[1].step, 400u);
}

TEST(Train, StopsEarlyAtTargetReturn) {
  log::set_level(log::Level::kWarn);
  TrainConfig c;
  c.env = "bandit";
  c.hidden = {8};
  c.batch = 16;
  c.total_steps = 300;
  c.rollout_block = 100;
  c.gradient_block = 1;
  c.eval_episodes = 1;
  c.stop_return = -1.0;  // any bandit return qualifies
  const auto r = train(c);
  EXPECT_TRUE(r.stopped_early);
  EXPECT_EQ(r.metrics.size(), 1u);
}

}  // namespace
}  // namespace mixent::sacm
