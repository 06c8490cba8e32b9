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

#include "mixent/entropy/variance.hpp"

#include <limits>

#include "mixent/common/error.hpp"
#include "mixent/entropy/estimators.hpp"

namespace mixent::entropy {

VarianceComparison compare_estimator_variance(const dist::MixtureSpec& m, std::size_t resamples,
                                              Rng& rng) {
  m.validate();
  if (resamples < 2) throw ContractError("variance comparison needs at least two resamples");
  const std::size_t n = m.size();
  std::vector<std::vector<double>> cross(n);
  std::vector<std::vector<double>> marginal(n);
  double mean1 = 0.0, m2_1 = 0.0, mean2 = 0.0, m2_2 = 0.0;
  for (std::size_t k = 0; k < resamples; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      cross[i] = dist::sample_gaussian(m.components[i], rng);
      marginal[i] = dist::sample_gaussian(m.components[i], rng);
    }
    const double one = sampled_estimator(m, cross);
    const double two = two_sample_estimator(m, marginal, cross);
    const double kk = static_cast<double>(k + 1);
    const double d1 = one - mean1;
    mean1 += d1 / kk;
    m2_1 += d1 * (one - mean1);
    const double d2 = two - mean2;
    mean2 += d2 / kk;
    m2_2 += d2 * (two - mean2);
  }
  VarianceComparison out;
  const double dof = static_cast<double>(resamples - 1);
  out.mean_one_sample = mean1;
  out.mean_two_sample = mean2;
  out.var_one_sample = m2_1 / dof;
  out.var_two_sample = m2_2 / dof;
  out.ratio = out.var_two_sample > 0.0 ? out.var_one_sample / out.var_two_sample
                                       : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace mixent::entropy
