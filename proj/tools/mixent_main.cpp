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

// mixent: train mixture actor-critic agents and verify the entropy estimators.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "mixent/cli/commands.hpp"
#include "mixent/common/error.hpp"
#include "mixent/common/log.hpp"
#include "mixent/sacm/config.hpp"

namespace {

using mixent::cli::TrainArgs;

struct TrainFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::vector<std::string> sets;
};

std::string dashed(std::string s) {
  for (char& c : s) {
    if (c == '_') c = '-';
  }
  return s;
}

void add_train_options(CLI::App* app, TrainArgs& args, TrainFlags& flags) {
  app->add_option("--config", args.config, "flat key = value config file")->check(CLI::ExistingFile);
  app->add_option("--seeds", args.seeds, "number of seeds, starting at the config seed");
  app->add_option("--jobs", args.jobs, "concurrent runs (default: available parallelism)");
  app->add_option("--out", args.out, "output root (default: $MIXENT_OUT or ./runs)");
  app->add_option("--set", flags.sets, "override as key=value (repeatable)");
  for (const auto& key : mixent::sacm::TrainConfig::keys()) {
    std::string names = "--" + key;
    if (dashed(key) != key) names += ",--" + dashed(key);
    if (key == "total_steps") names += ",--steps";
    flags.options[key] = app->add_option(names, flags.values[key], "config key '" + key + "'");
  }
}

// --set pairs first, then dedicated flags, so an explicit --key always wins.
int collect_overrides(TrainArgs& args, const TrainFlags& flags) {
  for (const auto& s : flags.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << s << "'\n";
      return mixent::cli::kExitUsage;
    }
    args.overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& key : mixent::sacm::TrainConfig::keys()) {
    if (flags.options.at(key)->count() > 0) args.overrides.emplace_back(key, flags.values.at(key));
  }
  return mixent::cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixent: mixture-entropy estimators and mixture actor-critic training"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "log progress to stderr");

  TrainArgs train_args;
  TrainFlags train_flags;
  auto* train = app.add_subcommand("train", "train one configuration over one or more seeds");
  add_train_options(train, train_args, train_flags);

  mixent::cli::EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "evaluate a saved policy");
  eval->add_option("checkpoint", eval_args.checkpoint, "checkpoint file")->required();
  eval->add_option("--episodes", eval_args.episodes, "episodes to roll out");
  eval->add_option("--mode", eval_args.mode, "stochastic | deterministic");
  eval->add_option("--seed", eval_args.seed, "evaluation seed");

  mixent::cli::EntropyCheckArgs ent_args;
  auto* ent = app.add_subcommand("entropy-check", "check estimator bounds on random mixtures");
  ent->add_option("--count", ent_args.count, "number of random mixtures");
  ent->add_option("--dims", ent_args.dims, "maximum dimension");
  ent->add_option("--components", ent_args.components, "maximum component count");
  ent->add_option("--seed", ent_args.seed, "generator seed");
  ent->add_option("--oracle", ent_args.oracle, "off | quadrature | mc | auto");
  ent->add_option("--mc-samples", ent_args.mc_samples, "Monte Carlo oracle samples");
  ent->add_option("--sampled-sets", ent_args.sampled_sets, "sample sets averaged for the sampled column");
  ent->add_option("--mean-range", ent_args.mean_range, "component means drawn in +-range");
  ent->add_option("--log-std-range", ent_args.log_std_range, "log std drawn in +-range");
  ent->add_option("--output", ent_args.output, "CSV path (default: stdout)");

  mixent::cli::VarianceCheckArgs var_args;
  auto* var = app.add_subcommand("variance-check", "compare one- and two-sample estimator variance");
  var->add_option("--mixtures", var_args.mixtures, "number of random mixtures");
  var->add_option("--resamples", var_args.resamples, "resamples per mixture (at least 100)");
  var->add_option("--seed", var_args.seed, "generator seed");
  var->add_option("--output", var_args.output, "CSV path (default: stdout)");

  mixent::cli::SweepArgs sweep_args;
  TrainFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "train every value of one config key");
  sweep->add_option("spec", sweep_args.spec, "key=v1,v2,...")->required();
  add_train_options(sweep, sweep_args.train, sweep_flags);

  CLI11_PARSE(app, argc, argv);
  mixent::log::set_level(verbose ? mixent::log::Level::kInfo : mixent::log::Level::kWarn);

  try {
    if (*train) {
      if (int rc = collect_overrides(train_args, train_flags)) return rc;
      return mixent::cli::cmd_train(train_args, std::cout, std::cerr);
    }
    if (*eval) return mixent::cli::cmd_eval(eval_args, std::cout, std::cerr);
    if (*ent) return mixent::cli::cmd_entropy_check(ent_args, std::cout, std::cerr);
    if (*var) return mixent::cli::cmd_variance_check(var_args, std::cout, std::cerr);
    if (*sweep) {
      if (int rc = collect_overrides(sweep_args.train, sweep_flags)) return rc;
      return mixent::cli::cmd_sweep(sweep_args, std::cout, std::cerr);
    }
  } catch (const mixent::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mixent::cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
