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

#include "mixent/sacm/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mixent/common/csv.hpp"
#include "mixent/common/error.hpp"
#include "mixent/dist/mixture.hpp"
#include "mixent/envs/env.hpp"

namespace mixent::sacm {

std::string_view variant_name(Variant v) { return v == Variant::kSacm ? "sacm" : "s2acm"; }

std::string_view critic_data_name(CriticData c) {
  return c == CriticData::kShared ? "shared" : "bootstrap";
}

std::string_view act_mode_name(ActMode m) {
  return m == ActMode::kStochastic ? "stochastic" : "deterministic";
}

ActMode parse_act_mode(std::string_view name) {
  if (name == "stochastic") return ActMode::kStochastic;
  if (name == "deterministic") return ActMode::kDeterministic;
  throw ConfigError("eval_mode: expected stochastic|deterministic, got '" + std::string(name) + "'");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + t + "'");
  }
  return v;
}

std::uint64_t parse_uint(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
    throw ConfigError(std::string(key) + ": expected a nonnegative integer, got '" + t + "'");
  }
  return v;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += csv::format_double(v[i]);
  }
  return s;
}

}  // namespace

std::vector<double> TrainConfig::mixture_weights() const {
  return weights.empty() ? dist::uniform_weights(n) : weights;
}

double TrainConfig::resolved_target_entropy(std::size_t action_dim) const {
  return target_entropy ? *target_entropy : -std::log(static_cast<double>(action_dim));
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw ConfigError(field + ": " + msg);
  };
  if (!envs::is_known_env(env)) fail("env", "unknown environment '" + env + "'");
  if (n < 1) fail("n", "mixture size must be at least 1");
  if (!weights.empty()) {
    if (weights.size() != n) fail("weights", "expected " + std::to_string(n) + " weights");
    try {
      dist::validate_weights(weights);
    } catch (const Error& e) {
      fail("weights", e.what());
    }
  }
  auto unit = [&](const char* field, double v) {
    if (!(v > 0.0 && v <= 1.0)) fail(field, "must lie in (0, 1]");
  };
  unit("gamma", gamma);
  unit("tau", tau);
  unit("lr", lr);
  if (batch < 1) fail("batch", "must be positive");
  if (rollout_block < 1) fail("rollout_block", "must be positive");
  if (target_entropy && !std::isfinite(*target_entropy)) fail("target_entropy", "must be finite");
  if (!(alpha_init > 0.0) || !std::isfinite(alpha_init)) fail("alpha_init", "must be positive");
  if (hidden.empty()) fail("hidden", "at least one hidden layer is required");
  for (auto h : hidden) {
    if (h == 0) fail("hidden", "widths must be positive");
  }
  if (replay_capacity < batch) fail("replay_capacity", "must be at least batch");
  if (eval_episodes < 1) fail("eval_episodes", "must be positive");
  if (stop_return && !std::isfinite(*stop_return)) fail("stop_return", "must be finite");
}

const std::vector<std::string>& TrainConfig::keys() {
  static const std::vector<std::string> k{
      "env",         "n",          "weights",       "gamma",          "tau",
      "lr",          "batch",      "rollout_block", "gradient_block", "target_entropy",
      "alpha_init",  "total_steps", "variant",      "critic_data",    "seed",
      "hidden",      "replay_capacity", "eval_episodes", "eval_mode", "checkpoint_every",
      "stop_return"};
  return k;
}

bool TrainConfig::has_key(std::string_view key) {
  for (const auto& k : keys()) {
    if (k == key) return true;
  }
  return false;
}

void TrainConfig::set(std::string_view key, std::string_view raw) {
  const std::string value = trim(raw);
  if (key == "env") {
    env = value;
  } else if (key == "n") {
    n = parse_uint(key, value);
  } else if (key == "weights") {
    weights.clear();
    for (const auto& item : split_list(value)) weights.push_back(parse_double(key, item));
  } else if (key == "gamma") {
    gamma = parse_double(key, value);
  } else if (key == "tau") {
    tau = parse_double(key, value);
  } else if (key == "lr") {
    lr = parse_double(key, value);
  } else if (key == "batch") {
    batch = parse_uint(key, value);
  } else if (key == "rollout_block") {
    rollout_block = parse_uint(key, value);
  } else if (key == "gradient_block") {
    gradient_block = parse_uint(key, value);
  } else if (key == "target_entropy") {
    if (value == "auto" || value.empty()) {
      target_entropy.reset();
    } else {
      target_entropy = parse_double(key, value);
    }
  } else if (key == "alpha_init") {
    alpha_init = parse_double(key, value);
  } else if (key == "total_steps") {
    total_steps = parse_uint(key, value);
  } else if (key == "variant") {
    if (value == "sacm") {
      variant = Variant::kSacm;
    } else if (value == "s2acm") {
      variant = Variant::kS2acm;
    } else {
      throw ConfigError("variant: expected sacm|s2acm, got '" + value + "'");
    }
  } else if (key == "critic_data") {
    if (value == "shared") {
      critic_data = CriticData::kShared;
    } else if (value == "bootstrap") {
      critic_data = CriticData::kBootstrap;
    } else {
      throw ConfigError("critic_data: expected shared|bootstrap, got '" + value + "'");
    }
  } else if (key == "seed") {
    seed = parse_uint(key, value);
  } else if (key == "hidden") {
    hidden.clear();
    for (const auto& item : split_list(value)) hidden.push_back(parse_uint(key, item));
  } else if (key == "replay_capacity") {
    replay_capacity = parse_uint(key, value);
  } else if (key == "eval_episodes") {
    eval_episodes = parse_uint(key, value);
  } else if (key == "eval_mode") {
    eval_mode = parse_act_mode(value);
  } else if (key == "checkpoint_every") {
    checkpoint_every = parse_uint(key, value);
  } else if (key == "stop_return") {
    if (value == "none" || value.empty()) {
      stop_return.reset();
    } else {
      stop_return = parse_double(key, value);
    }
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

std::string TrainConfig::get(std::string_view key) const {
  if (key == "env") return env;
  if (key == "n") return std::to_string(n);
  if (key == "weights") return join_doubles(weights);
  if (key == "gamma") return csv::format_double(gamma);
  if (key == "tau") return csv::format_double(tau);
  if (key == "lr") return csv::format_double(lr);
  if (key == "batch") return std::to_string(batch);
  if (key == "rollout_block") return std::to_string(rollout_block);
  if (key == "gradient_block") return std::to_string(gradient_block);
  if (key == "target_entropy") return target_entropy ? csv::format_double(*target_entropy) : "auto";
  if (key == "alpha_init") return csv::format_double(alpha_init);
  if (key == "total_steps") return std::to_string(total_steps);
  if (key == "variant") return std::string(variant_name(variant));
  if (key == "critic_data") return std::string(critic_data_name(critic_data));
  if (key == "seed") return std::to_string(seed);
  if (key == "hidden") {
    std::string s;
    for (std::size_t i = 0; i < hidden.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(hidden[i]);
    }
    return s;
  }
  if (key == "replay_capacity") return std::to_string(replay_capacity);
  if (key == "eval_episodes") return std::to_string(eval_episodes);
  if (key == "eval_mode") return std::string(act_mode_name(eval_mode));
  if (key == "checkpoint_every") return std::to_string(checkpoint_every);
  if (key == "stop_return") return stop_return ? csv::format_double(*stop_return) : "none";
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::vector<std::pair<std::string, std::string>> TrainConfig::to_pairs() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : keys()) out.emplace_back(k, get(k));
  return out;
}

std::string TrainConfig::to_text() const {
  std::ostringstream os;
  for (const auto& [k, v] : to_pairs()) os << k << " = " << v << '\n';
  return os.str();
}

}  // namespace mixent::sacm
