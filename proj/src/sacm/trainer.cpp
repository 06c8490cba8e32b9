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

#include "mixent/sacm/trainer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>

#include "mixent/common/csv.hpp"
#include "mixent/common/log.hpp"
#include "mixent/envs/env.hpp"
#include "mixent/nn/checkpoint.hpp"
#include "mixent/sacm/replay.hpp"
#include "mixent/sacm/updates.hpp"

namespace mixent::sacm {

namespace {

constexpr std::size_t kDiagnosticStates = 256;

nn::Checkpoint snapshot(const Agent& agent, const TrainConfig& config, std::size_t step,
                        std::size_t block) {
  nn::Checkpoint ck;
  ck.step = static_cast<std::int64_t>(step);
  ck.meta["block"] = block;
  for (const auto& [k, v] : config.to_pairs()) ck.meta["config"][k] = v;
  agent.save(ck);
  return ck;
}

std::string step_name(std::size_t step) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "step-%09zu.ckpt", step);
  return buf;
}

}  // namespace

std::uint64_t evaluation_seed(const TrainConfig& config) {
  return config.seed * 0x9E3779B97F4A7C15ULL + 0xE7A1ULL;
}

TrainResult train(const TrainConfig& config, const TrainOptions& options) {
  config.validate();
  auto env = envs::make_env(config.env);
  auto eval_env = envs::make_env(config.env);
  const auto& box = env->box();

  Rng root(config.seed);
  Rng init_rng = root.split();
  Rng env_rng = root.split();
  Rng act_rng = root.split();
  Rng update_rng = root.split();
  Rng replay_rng = root.split();
  Rng diag_rng = root.split();

  Agent agent(config, env->obs_dim(), box, init_rng);
  ReplayBuffer replay(std::min(config.replay_capacity, std::max(config.total_steps, config.batch)),
                      env->obs_dim(), box.dim(), config.n);

  const bool write = !options.out_dir.empty();
  const auto ckpt_dir = options.out_dir / "checkpoints";
  std::ofstream csv_out;
  std::optional<csv::Writer> csv_writer;
  if (write) {
    std::filesystem::create_directories(ckpt_dir);
    csv_out.open(options.out_dir / "metrics.csv", std::ios::binary | std::ios::trunc);
    if (!csv_out) throw ContractError("cannot write " + (options.out_dir / "metrics.csv").string());
    csv_writer.emplace(csv_out, metrics_header(config.n));
    csv_out.flush();
    snapshot(agent, config, 0, 0).save(ckpt_dir / step_name(0));
  }

  TrainResult result;
  result.weights = agent.weights();
  std::size_t steps = 0;
  std::size_t block = 0;
  auto obs = env->reset(env_rng);

  while (steps < config.total_steps) {
    ++block;
    try {
      const std::size_t todo = std::min(config.rollout_block, config.total_steps - steps);
      for (std::size_t k = 0; k < todo; ++k) {
        const auto a = act(agent.policy, obs, agent.weights(), box, act_rng, ActMode::kStochastic);
        auto step = env->step(a.action);
        replay.add({obs, a.action, step.reward, step.observation, step.terminal}, replay_rng);
        obs = step.done ? env->reset(env_rng) : std::move(step.observation);
      }
      steps += todo;

      BlockMetrics m;
      m.step = steps;
      m.block = block;
      m.policy_loss.assign(config.n, 0.0);
      std::size_t grad_steps = 0;
      if (replay.size() >= config.batch) {
        for (std::size_t k = 0; k < config.gradient_block; ++k) {
          const Batch batch = replay.sample(config.batch, replay_rng);
          const auto stats = agent.gradient_step(batch, update_rng);
          m.critic_loss += stats.critic_loss;
          for (std::size_t i = 0; i < config.n; ++i) m.policy_loss[i] += stats.policy_loss[i];
          ++grad_steps;
        }
      }
      if (grad_steps) {
        m.critic_loss /= static_cast<double>(grad_steps);
        for (double& l : m.policy_loss) l /= static_cast<double>(grad_steps);
      }
      m.alpha = agent.alphas();

      const auto eval = evaluate(agent.policy, agent.weights(), *eval_env, config.eval_episodes,
                                 config.eval_mode, evaluation_seed(config));
      m.eval_return_mean = eval.mean;
      m.eval_return_std = eval.std;

      const std::size_t diag_rows = std::min(kDiagnosticStates, replay.size());
      const auto states = replay.sample(diag_rows, diag_rng).s;
      const auto diag = diagnose(agent.policy, agent.weights(), box, states, diag_rng);
      m.head_entropy = diag.head_entropy;
      m.mean_pairwise_kl = diag.mean_pairwise_kl;
      m.sampled_mixture_entropy = diag.sampled_mixture_entropy;

      if (!metrics_finite(m)) throw NonFiniteError("non-finite block metric");

      if (write) {
        csv_writer->row(metrics_row(m));
        csv_out.flush();
        const auto ck = snapshot(agent, config, steps, block);
        ck.save(ckpt_dir / "last_good.ckpt");
        if (config.checkpoint_every && block % config.checkpoint_every == 0) {
          ck.save(ckpt_dir / step_name(steps));
        }
      }
      result.metrics.push_back(m);
      if (options.on_block) options.on_block(m);
      log::info("block " + std::to_string(block) + " step " + std::to_string(steps) +
                " eval " + csv::format_double(m.eval_return_mean));
      if (config.stop_return && m.eval_return_mean >= *config.stop_return) {
        result.stopped_early = true;
        break;
      }
    } catch (const Error& e) {
      const bool numeric = dynamic_cast<const NonFiniteError*>(&e) ||
                           dynamic_cast<const OptimizerError*>(&e) ||
                           dynamic_cast<const EstimatorError*>(&e);
      if (!numeric) throw;
      throw TrainingAborted("training aborted in block " + std::to_string(block) + " at step " +
                            std::to_string(steps) + ": " + e.what() +
                            (write ? "; last good checkpoint kept in " + ckpt_dir.string() : ""));
    }
  }

  if (write && steps > 0) snapshot(agent, config, steps, block).save(ckpt_dir / step_name(steps));
  result.env_steps = steps;
  result.alphas = agent.alphas();
  result.policy = agent.policy;
  return result;
}

}  // namespace mixent::sacm
