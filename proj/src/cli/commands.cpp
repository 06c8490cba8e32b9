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

#include "mixent/cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "mixent/cli/manifest.hpp"
#include "mixent/cli/pool.hpp"
#include "mixent/common/csv.hpp"
#include "mixent/common/error.hpp"
#include "mixent/entropy/random_mixture.hpp"
#include "mixent/entropy/report.hpp"
#include "mixent/entropy/variance.hpp"
#include "mixent/envs/env.hpp"
#include "mixent/nn/checkpoint.hpp"
#include "mixent/sacm/metrics.hpp"
#include "mixent/sacm/trainer.hpp"

namespace mixent::cli {

namespace {

sacm::TrainConfig resolve_config(const TrainArgs& args) {
  sacm::TrainConfig config = args.config ? load_config(*args.config) : sacm::TrainConfig{};
  apply_overrides(config, args.overrides);
  config.validate();
  return config;
}

struct RunSpec {
  sacm::TrainConfig config;
  std::filesystem::path dir;
};

struct RunOutcome {
  double final_eval = 0.0;
  std::size_t steps = 0;
  std::size_t blocks = 0;
};

std::vector<RunOutcome> run_all(const std::vector<RunSpec>& runs, std::size_t jobs) {
  std::vector<RunOutcome> outcomes(runs.size());
  parallel_for(runs.size(), worker_count(jobs), [&](std::size_t i) {
    sacm::TrainOptions options;
    options.out_dir = runs[i].dir;
    const auto result = sacm::train(runs[i].config, options);
    outcomes[i].steps = result.env_steps;
    outcomes[i].blocks = result.metrics.size();
    if (!result.metrics.empty()) outcomes[i].final_eval = result.metrics.back().eval_return_mean;
  });
  return outcomes;
}

std::vector<std::uint64_t> seed_list(const sacm::TrainConfig& config, std::size_t count) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t k = 0; k < count; ++k) seeds.push_back(config.seed + k);
  return seeds;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ContractError("cannot write " + path.string());
  out << text;
}

// Mean of y over series at each x present in any series.
Series mean_series(const std::vector<Series>& series, std::string name) {
  std::map<double, std::pair<double, std::size_t>> acc;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      auto& [sum, n] = acc[s.x[i]];
      sum += s.y[i];
      ++n;
    }
  }
  Series mean{std::move(name), {}, {}, true};
  for (const auto& [x, v] : acc) {
    mean.x.push_back(x);
    mean.y.push_back(v.first / static_cast<double>(v.second));
  }
  return mean;
}

std::string mixture_description(const dist::MixtureSpec& m) {
  std::ostringstream os;
  os << "weights=[";
  for (std::size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << csv::format_double(m.weights[i]);
  os << "]";
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << " component" << i << "{mean=[";
    for (std::size_t k = 0; k < m.dim(); ++k) os << (k ? "," : "") << csv::format_double(m.components[i].mean[k]);
    os << "] log_std=[";
    for (std::size_t k = 0; k < m.dim(); ++k) os << (k ? "," : "") << csv::format_double(m.components[i].log_std[k]);
    os << "]}";
  }
  return os.str();
}

class CsvSink {
 public:
  CsvSink(const std::optional<std::filesystem::path>& path, std::ostream& fallback) {
    if (path) {
      if (path->has_parent_path()) std::filesystem::create_directories(path->parent_path());
      file_.open(*path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ContractError("cannot write " + path->string());
    }
    stream_ = path ? static_cast<std::ostream*>(&file_) : &fallback;
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

}  // namespace

LineChart train_chart_from_csvs(const std::vector<std::filesystem::path>& csvs,
                                const std::vector<std::string>& names, const std::string& title) {
  LineChart chart{title, "environment step", "evaluation return", {}};
  for (std::size_t i = 0; i < csvs.size(); ++i) {
    const auto table = csv::read_file(csvs[i].string());
    chart.series.push_back({names.at(i), table.numeric_column("step"),
                            table.numeric_column("eval_return_mean"), false});
  }
  if (csvs.size() > 1) chart.series.push_back(mean_series(chart.series, "mean"));
  return chart;
}

LineChart sweep_chart_from_csv(const std::filesystem::path& combined, const std::string& key) {
  const auto table = csv::read_file(combined.string());
  const std::size_t vc = table.column("value");
  const auto steps = table.numeric_column("step");
  const auto returns = table.numeric_column("eval_return_mean");
  std::vector<std::string> order;
  std::map<std::string, std::vector<Series>> by_value;
  std::map<std::string, std::map<std::string, std::size_t>> seed_index;
  const std::size_t sc = table.column("seed");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& value = table.rows[r][vc];
    const auto& seed = table.rows[r][sc];
    if (!by_value.count(value)) order.push_back(value);
    auto& runs = by_value[value];
    auto [it, inserted] = seed_index[value].try_emplace(seed, runs.size());
    if (inserted) runs.push_back({seed, {}, {}, false});
    runs[it->second].x.push_back(steps[r]);
    runs[it->second].y.push_back(returns[r]);
  }
  LineChart chart{"mean evaluation return by " + key, "environment step", "evaluation return", {}};
  for (const auto& v : order) chart.series.push_back(mean_series(by_value[v], key + "=" + v));
  return chart;
}

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  sacm::TrainConfig config;
  try {
    config = resolve_config(args);
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  }
  if (args.seeds == 0) {
    err << "error: --seeds must be positive\n";
    return kExitUsage;
  }
  const auto root = output_root(args.out);
  const auto manifest = RunManifest::create(config, seed_list(config, args.seeds), root);
  manifest.write();

  std::vector<RunSpec> runs;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < manifest.seeds.size(); ++i) {
    sacm::TrainConfig c = config;
    c.seed = manifest.seeds[i];
    runs.push_back({c, manifest.csv_paths[i].parent_path()});
    names.push_back("seed " + std::to_string(c.seed));
  }
  std::vector<RunOutcome> outcomes;
  try {
    outcomes = run_all(runs, args.jobs);
  } catch (const sacm::TrainingAborted& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  const auto chart = train_chart_from_csvs(manifest.csv_paths, names,
                                           config.env + ", n=" + std::to_string(config.n) + ", " +
                                               std::string(sacm::variant_name(config.variant)));
  write_text(manifest.out_dir / "eval_return.svg", render_svg(chart));
  out << "config " << manifest.hash.substr(0, 12) << " -> " << manifest.out_dir.generic_string() << '\n';
  for (std::size_t i = 0; i < runs.size(); ++i) {
    out << "seed " << runs[i].config.seed << ": " << outcomes[i].steps << " steps, "
        << outcomes[i].blocks << " blocks, final eval return "
        << csv::format_double(outcomes[i].final_eval) << '\n';
  }
  return kExitOk;
}

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  nn::Checkpoint ck;
  sacm::TrainConfig config;
  sacm::ActMode mode;
  try {
    mode = sacm::parse_act_mode(args.mode);
    ck = nn::Checkpoint::load(args.checkpoint);
    if (!ck.meta.contains("config")) throw ConfigError("checkpoint carries no configuration");
    for (const auto& [k, v] : ck.meta["config"].items()) config.set(k, v.get<std::string>());
    config.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (args.episodes == 0) {
    err << "error: --episodes must be positive\n";
    return kExitUsage;
  }
  const auto policy = sacm::PolicyNet::load(ck, "policy", config.n);
  auto env = envs::make_env(config.env);
  const auto result =
      sacm::evaluate(policy, config.mixture_weights(), *env, args.episodes, mode, args.seed);
  out << "env " << config.env << ", step " << ck.step << ", " << args.episodes << " episodes ("
      << args.mode << "): mean " << csv::format_double(result.mean) << ", std "
      << csv::format_double(result.std) << '\n';
  return kExitOk;
}

int cmd_entropy_check(const EntropyCheckArgs& args, std::ostream& out, std::ostream& err) {
  if (args.count == 0 || args.dims == 0 || args.components == 0) {
    err << "error: --count, --dims and --components must be positive\n";
    return kExitUsage;
  }
  entropy::ReportOptions options;
  try {
    options.oracle = entropy::parse_oracle_mode(args.oracle);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  options.mc_samples = args.mc_samples;
  options.sampled_sets = args.sampled_sets;
  if (options.oracle == entropy::OracleMode::kQuadrature && args.dims > 2) {
    err << "error: quadrature oracle supports at most 2 dimensions\n";
    return kExitUsage;
  }

  entropy::MixtureSampler sampler;
  sampler.max_components = args.components;
  sampler.max_dim = args.dims;
  sampler.mean_range = args.mean_range;
  sampler.log_std_range = args.log_std_range;

  CsvSink sink(args.output, out);
  csv::Writer w(sink.stream(), {"index", "components", "dim", "cond_lower", "joint_upper",
                                "weight_entropy", "pairwise", "sampled", "sampled_stderr",
                                "oracle", "oracle_stderr", "oracle_method", "ok"});
  Rng rng(args.seed);
  Rng estimator_rng = rng.split();
  std::size_t failures = 0;
  for (std::size_t i = 0; i < args.count; ++i) {
    const auto m = entropy::random_mixture(sampler, rng);
    const auto report = entropy::entropy_report(m, options, estimator_rng);
    const auto check = entropy::check_invariants(report);
    std::string oracle, oracle_se, method;
    if (report.oracle) {
      oracle = csv::format_double(report.oracle->value);
      oracle_se = csv::format_double(report.oracle->stderr_);
      method = *report.oracle_method == entropy::OracleMethod::kQuadrature ? "quadrature" : "mc";
    }
    w.row({std::to_string(i), std::to_string(m.size()), std::to_string(m.dim()),
           csv::format_double(report.cond_lower), csv::format_double(report.joint_upper),
           csv::format_double(report.weight_entropy), csv::format_double(report.pairwise),
           csv::format_double(report.sampled), csv::format_double(report.sampled_stderr), oracle,
           oracle_se, method, check.ok() ? "1" : "0"});
    if (!check.ok()) {
      ++failures;
      err << "invariant failure in mixture " << i << ": " << check.describe() << ' '
          << mixture_description(m) << '\n';
    }
  }
  err << "entropy-check: " << args.count << " mixtures, " << failures << " invariant failures\n";
  return failures ? kExitCheckFailed : kExitOk;
}

int cmd_variance_check(const VarianceCheckArgs& args, std::ostream& out, std::ostream& err) {
  if (args.resamples < 100) {
    err << "error: insufficient resamples (" << args.resamples << " < 100)\n";
    return kExitUsage;
  }
  if (args.mixtures == 0) {
    err << "error: --mixtures must be positive\n";
    return kExitUsage;
  }
  const auto sampler = entropy::MixtureSampler::overlapping();
  CsvSink sink(args.output, out);
  csv::Writer w(sink.stream(), {"index", "components", "dim", "mean_one_sample", "mean_two_sample",
                                "var_one_sample", "var_two_sample", "ratio"});
  Rng rng(args.seed);
  Rng resample_rng = rng.split();
  std::vector<double> ratios;
  for (std::size_t i = 0; i < args.mixtures; ++i) {
    const auto m = entropy::random_mixture(sampler, rng);
    const auto v = entropy::compare_estimator_variance(m, args.resamples, resample_rng);
    ratios.push_back(v.ratio);
    w.row({std::to_string(i), std::to_string(m.size()), std::to_string(m.dim()),
           csv::format_double(v.mean_one_sample), csv::format_double(v.mean_two_sample),
           csv::format_double(v.var_one_sample), csv::format_double(v.var_two_sample),
           csv::format_double(v.ratio)});
  }
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  const auto below = std::count_if(ratios.begin(), ratios.end(), [](double r) { return r < 1.0; });
  err << "variance-check: median ratio " << csv::format_double(median) << ", " << below << "/" << n
      << " mixtures below 1\n";
  return median > 1.0 ? kExitCheckFailed : kExitOk;
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  const auto eq = args.spec.find('=');
  const std::string key = eq == std::string::npos ? args.spec : args.spec.substr(0, eq);
  if (eq == std::string::npos || !sacm::TrainConfig::has_key(key) || key == "seed") {
    err << "error: invalid sweep key '" << key << "' (expected key=v1,v2,... over config keys other than seed)\n";
    return kExitUsage;
  }
  std::vector<std::string> values;
  {
    std::string cur;
    for (char c : args.spec.substr(eq + 1) + ",") {
      if (c == ',') {
        if (!cur.empty()) values.push_back(cur);
        cur.clear();
      } else if (c != ' ') {
        cur += c;
      }
    }
  }
  if (values.empty()) {
    err << "error: sweep '" << key << "' has no values\n";
    return kExitUsage;
  }
  if (args.train.seeds == 0) {
    err << "error: --seeds must be positive\n";
    return kExitUsage;
  }

  sacm::TrainConfig base;
  std::vector<sacm::TrainConfig> configs;
  try {
    base = resolve_config(args.train);
    for (const auto& v : values) {
      sacm::TrainConfig c = base;
      c.set(key, v);
      c.validate();
      configs.push_back(c);
    }
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto root = output_root(args.train.out);
  std::vector<RunSpec> runs;
  std::vector<std::pair<std::size_t, std::uint64_t>> labels;  // (value index, seed)
  for (std::size_t v = 0; v < configs.size(); ++v) {
    const auto manifest = RunManifest::create(configs[v], seed_list(configs[v], args.train.seeds), root);
    manifest.write();
    for (std::size_t i = 0; i < manifest.seeds.size(); ++i) {
      sacm::TrainConfig c = configs[v];
      c.seed = manifest.seeds[i];
      runs.push_back({c, manifest.csv_paths[i].parent_path()});
      labels.emplace_back(v, c.seed);
    }
  }
  try {
    run_all(runs, args.train.jobs);
  } catch (const sacm::TrainingAborted& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }

  sacm::TrainConfig tag = base;
  tag.seed = 0;
  const auto sweep_dir = root / ("sweep-" + key + "-" + git_blob_hash(tag.to_text() + args.spec).substr(0, 12));
  std::filesystem::create_directories(sweep_dir);
  const auto combined = sweep_dir / "combined.csv";
  {
    std::ofstream f(combined, std::ios::binary | std::ios::trunc);
    csv::Writer w(f, {"key", "value", "seed", "step", "block", "eval_return_mean", "eval_return_std",
                      "critic_loss", "mean_pairwise_kl", "sampled_mixture_entropy"});
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const auto t = csv::read_file((runs[r].dir / "metrics.csv").string());
      const std::size_t cols[] = {t.column("step"), t.column("block"), t.column("eval_return_mean"),
                                  t.column("eval_return_std"), t.column("critic_loss"),
                                  t.column("mean_pairwise_kl"), t.column("sampled_mixture_entropy")};
      for (const auto& row : t.rows) {
        std::vector<std::string> fields{key, values[labels[r].first], std::to_string(labels[r].second)};
        for (auto c : cols) fields.push_back(row[c]);
        w.row(fields);
      }
    }
  }
  write_text(sweep_dir / "sweep.svg", render_svg(sweep_chart_from_csv(combined, key)));
  out << "sweep " << key << " over " << values.size() << " values x " << args.train.seeds
      << " seeds -> " << sweep_dir.generic_string() << '\n';
  return kExitOk;
}

}  // namespace mixent::cli
