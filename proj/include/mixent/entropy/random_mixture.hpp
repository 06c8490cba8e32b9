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

#include <cstddef>

#include "mixent/common/rng.hpp"
#include "mixent/dist/mixture.hpp"

namespace mixent::entropy {

/// Distribution over random test mixtures. Component count and dimension are
/// uniform over their ranges, means uniform in +-mean_range, log_std uniform
/// in +-log_std_range, weights Dirichlet(1) unless uniform_weights is set.
struct MixtureSampler {
  std::size_t min_components = 1;
  std::size_t max_components = 5;
  std::size_t min_dim = 1;
  std::size_t max_dim = 4;
  double mean_range = 5.0;
  double log_std_range = 1.0;
  bool uniform_weights = false;

  /// Overlapping, uniformly weighted mixtures used for variance comparisons.
  static MixtureSampler overlapping();
};

dist::MixtureSpec random_mixture(const MixtureSampler& sampler, Rng& rng);

}  // namespace mixent::entropy
