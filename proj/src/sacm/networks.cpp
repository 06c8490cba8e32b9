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

#include "mixent/sacm/networks.hpp"

#include <algorithm>
#include <string>

#include "mixent/common/error.hpp"
#include "mixent/simd/kernels.hpp"

namespace mixent::sacm {

PolicyNet PolicyNet::make(std::size_t obs_dim, std::size_t action_dim, std::size_t n,
                          const std::vector<std::size_t>& hidden, Rng& rng) {
  if (n == 0 || hidden.empty()) throw ContractError("policy needs at least one head and one hidden layer");
  std::vector<std::size_t> widths{obs_dim};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  PolicyNet p;
  p.action_dim = action_dim;
  p.trunk = nn::Mlp::make(widths, nn::Activation::kRelu, nn::Activation::kRelu, rng);
  for (std::size_t i = 0; i < n; ++i) {
    p.heads.push_back(nn::Mlp::make({hidden.back(), 2 * action_dim}, nn::Activation::kIdentity,
                                    nn::Activation::kIdentity, rng));
  }
  return p;
}

std::vector<std::vector<dist::DiagGaussian>> PolicyNet::distributions(const nn::Tensor& obs) const {
  const nn::Tensor features = trunk.predict(obs);
  std::vector<std::vector<dist::DiagGaussian>> out(heads.size());
  const std::size_t d = action_dim;
  for (std::size_t i = 0; i < heads.size(); ++i) {
    const nn::Tensor raw = heads[i].predict(features);
    out[i].reserve(raw.rows());
    for (std::size_t r = 0; r < raw.rows(); ++r) {
      auto row = raw.row_span(r);
      out[i].push_back(dist::DiagGaussian::make({row.begin(), row.begin() + d},
                                                {row.begin() + d, row.end()}));
    }
  }
  return out;
}

dist::MixtureSpec PolicyNet::mixture(std::span<const double> obs, std::span<const double> w) const {
  auto d = distributions(nn::Tensor::row(obs));
  dist::MixtureSpec m;
  m.weights.assign(w.begin(), w.end());
  for (auto& head : d) m.components.push_back(std::move(head.front()));
  return m;
}

PolicyNet::Nodes PolicyNet::forward(nn::Graph& g, nn::Var obs, nn::ParamMode mode) const {
  Nodes nodes;
  const nn::Var features = trunk.forward(g, obs, mode, &nodes.trunk);
  nodes.heads.resize(heads.size());
  for (std::size_t i = 0; i < heads.size(); ++i) {
    const nn::Var raw = heads[i].forward(g, features, mode, &nodes.heads[i]);
    nodes.outputs.push_back(dist::split_head(g, raw, action_dim));
  }
  return nodes;
}

void PolicyNet::save(nn::Checkpoint& ck, std::string_view prefix) const {
  ck.add_mlp(std::string(prefix) + ".trunk", trunk);
  for (std::size_t i = 0; i < heads.size(); ++i) {
    ck.add_mlp(std::string(prefix) + ".head" + std::to_string(i), heads[i]);
  }
}

PolicyNet PolicyNet::load(const nn::Checkpoint& ck, std::string_view prefix, std::size_t n) {
  PolicyNet p;
  p.trunk = ck.mlp(std::string(prefix) + ".trunk");
  for (std::size_t i = 0; i < n; ++i) p.heads.push_back(ck.mlp(std::string(prefix) + ".head" + std::to_string(i)));
  if (n == 0 || p.heads.front().output_width() % 2 != 0) throw ContractError("malformed policy checkpoint");
  p.action_dim = p.heads.front().output_width() / 2;
  return p;
}

CriticNet CriticNet::make(std::size_t obs_dim, std::size_t action_dim, std::size_t heads,
                          const std::vector<std::size_t>& hidden, Rng& rng) {
  std::vector<std::size_t> widths{obs_dim + action_dim};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(heads);
  CriticNet c;
  c.online = nn::Mlp::make(widths, nn::Activation::kRelu, nn::Activation::kIdentity, rng);
  c.target = c.online;
  return c;
}

nn::Tensor CriticNet::join(const nn::Tensor& s, const nn::Tensor& a) {
  if (s.rows() != a.rows()) throw DimensionError("state and action batches differ in length");
  nn::Tensor x = nn::Tensor::matrix(s.rows(), s.cols() + a.cols());
  for (std::size_t r = 0; r < s.rows(); ++r) {
    auto out = x.row_span(r);
    std::copy(s.row_span(r).begin(), s.row_span(r).end(), out.begin());
    std::copy(a.row_span(r).begin(), a.row_span(r).end(), out.begin() + s.cols());
  }
  return x;
}

nn::Tensor CriticNet::q(const nn::Tensor& s, const nn::Tensor& a) const {
  return online.predict(join(s, a));
}

nn::Tensor CriticNet::q_target(const nn::Tensor& s, const nn::Tensor& a) const {
  return target.predict(join(s, a));
}

void polyak(nn::Mlp& target, const nn::Mlp& online, double tau) {
  auto dst = target.parameters();
  const auto src = online.parameters();
  if (dst.size() != src.size()) throw DimensionError("polyak: networks differ in structure");
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (!dst[i]->same_shape(*src[i])) throw DimensionError("polyak: parameter shapes differ");
    simd::blend(tau, src[i]->data(), dst[i]->data());
  }
}

}  // namespace mixent::sacm
