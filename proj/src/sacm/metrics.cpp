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

#include "mixent/sacm/metrics.hpp"

#include <cmath>

#include "mixent/common/csv.hpp"
#include "mixent/dist/mixture.hpp"
#include "mixent/entropy/estimators.hpp"
#include "mixent/sacm/updates.hpp"

namespace mixent::sacm {

std::vector<std::string> metrics_header(std::size_t heads) {
  std::vector<std::string> h{"step", "block", "eval_return_mean", "eval_return_std", "critic_loss"};
  for (const char* name : {"policy_loss_", "alpha_", "head_entropy_"}) {
    for (std::size_t i = 0; i < heads; ++i) h.push_back(name + std::to_string(i));
  }
  h.push_back("mean_pairwise_kl");
  h.push_back("sampled_mixture_entropy");
  return h;
}

std::vector<std::string> metrics_row(const BlockMetrics& m) {
  std::vector<std::string> r{std::to_string(m.step), std::to_string(m.block),
                             csv::format_double(m.eval_return_mean),
                             csv::format_double(m.eval_return_std),
                             csv::format_double(m.critic_loss)};
  for (const auto* v : {&m.policy_loss, &m.alpha, &m.head_entropy}) {
    for (double x : *v) r.push_back(csv::format_double(x));
  }
  r.push_back(csv::format_double(m.mean_pairwise_kl));
  r.push_back(csv::format_double(m.sampled_mixture_entropy));
  return r;
}

bool metrics_finite(const BlockMetrics& m) {
  auto ok = [](double x) { return std::isfinite(x); };
  if (!ok(m.eval_return_mean) || !ok(m.eval_return_std) || !ok(m.critic_loss) ||
      !ok(m.mean_pairwise_kl) || !ok(m.sampled_mixture_entropy)) {
    return false;
  }
  for (const auto* v : {&m.policy_loss, &m.alpha, &m.head_entropy}) {
    for (double x : *v) {
      if (!ok(x)) return false;
    }
  }
  return true;
}

PolicyDiagnostics diagnose(const PolicyNet& policy, std::span<const double> w,
                           const dist::ActionBox& box, const nn::Tensor& states, Rng& rng) {
  const std::size_t N = policy.size();
  const std::size_t rows = states.rows();
  const auto heads = policy.distributions(states);
  PolicyDiagnostics d;
  d.head_entropy.assign(N, 0.0);
  std::vector<std::vector<double>> samples(N);
  std::vector<double> eps(policy.action_dim);
  for (std::size_t r = 0; r < rows; ++r) {
    dist::MixtureSpec m;
    m.weights.assign(w.begin(), w.end());
    for (std::size_t i = 0; i < N; ++i) m.components.push_back(heads[i][r]);
    for (std::size_t i = 0; i < N; ++i) {
      rng.fill_normal(eps);
      const auto s = dist::rsample(m.components[i], eps, box);
      d.head_entropy[i] -= s.log_prob;
      samples[i] = s.action;
    }
    d.sampled_mixture_entropy += entropy::sampled_estimator(m, samples, box, dist::Squash::kTanh);
    if (N > 1) {
      double kl = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
          if (i != j) kl += dist::gaussian_kl(m.components[i], m.components[j]);
        }
      }
      d.mean_pairwise_kl += kl / static_cast<double>(N * (N - 1));
    }
  }
  const double inv = rows ? 1.0 / static_cast<double>(rows) : 0.0;
  for (double& h : d.head_entropy) h *= inv;
  d.mean_pairwise_kl *= inv;
  d.sampled_mixture_entropy *= inv;
  return d;
}

EvalResult evaluate(const PolicyNet& policy, std::span<const double> w, envs::Env& env,
                    std::size_t episodes, ActMode mode, std::uint64_t seed) {
  Rng rng(seed);
  EvalResult out;
  for (std::size_t e = 0; e < episodes; ++e) {
    auto obs = env.reset(rng);
    double total = 0.0;
    for (;;) {
      const auto a = act(policy, obs, w, env.box(), rng, mode);
      auto step = env.step(a.action);
      total += step.reward;
      if (step.done) break;
      obs = std::move(step.observation);
    }
    out.returns.push_back(total);
  }
  double sum = 0.0;
  for (double r : out.returns) sum += r;
  out.mean = episodes ? sum / static_cast<double>(episodes) : 0.0;
  double var = 0.0;
  for (double r : out.returns) var += (r - out.mean) * (r - out.mean);
  out.std = episodes ? std::sqrt(var / static_cast<double>(episodes)) : 0.0;
  return out;
}

}  // namespace mixent::sacm
