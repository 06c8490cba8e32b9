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

#include "mixent/entropy/random_mixture.hpp"

#include <cmath>

#include "mixent/common/error.hpp"

namespace mixent::entropy {

MixtureSampler MixtureSampler::overlapping() {
  MixtureSampler s;
  s.min_components = 2;
  s.max_components = 5;
  s.min_dim = 1;
  s.max_dim = 2;
  s.mean_range = 3.0;
  s.log_std_range = 1.0;
  s.uniform_weights = true;
  return s;
}

dist::MixtureSpec random_mixture(const MixtureSampler& s, Rng& rng) {
  if (s.min_components < 1 || s.min_components > s.max_components || s.min_dim < 1 ||
      s.min_dim > s.max_dim) {
    throw ContractError("invalid mixture sampler ranges");
  }
  const std::size_t n = s.min_components + rng.index(s.max_components - s.min_components + 1);
  const std::size_t d = s.min_dim + rng.index(s.max_dim - s.min_dim + 1);
  dist::MixtureSpec m;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> mean(d);
    std::vector<double> log_std(d);
    for (std::size_t k = 0; k < d; ++k) {
      mean[k] = rng.uniform(-s.mean_range, s.mean_range);
      log_std[k] = rng.uniform(-s.log_std_range, s.log_std_range);
    }
    m.components.push_back(dist::DiagGaussian::make(std::move(mean), std::move(log_std)));
  }
  if (s.uniform_weights) {
    m.weights = dist::uniform_weights(n);
  } else {
    m.weights.resize(n);
    double total = 0.0;
    for (double& w : m.weights) {
      w = -std::log(1.0 - rng.uniform());
      total += w;
    }
    for (double& w : m.weights) w /= total;
  }
  return m;
}

}  // namespace mixent::entropy
