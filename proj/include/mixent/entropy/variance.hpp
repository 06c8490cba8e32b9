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

struct VarianceComparison {
  double mean_one_sample = 0.0;
  double mean_two_sample = 0.0;
  double var_one_sample = 0.0;
  double var_two_sample = 0.0;
  double ratio = 0.0;  // var_one_sample / var_two_sample
};

/// Empirical variances of the one-sample estimator and the two-sample form
/// over `resamples` independent draws. Both estimators share the cross
/// samples of each draw; the two-sample form additionally draws fresh
/// marginal samples.
VarianceComparison compare_estimator_variance(const dist::MixtureSpec& m, std::size_t resamples,
                                              Rng& rng);

}  // namespace mixent::entropy
