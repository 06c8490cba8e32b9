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

#include "mixent/entropy/discrete.hpp"

#include <cmath>

#include "mixent/common/error.hpp"
#include "mixent/dist/mixture.hpp"

namespace mixent::entropy {

void DiscreteMixture::validate() const {
  dist::validate_weights(weights);
  if (probs.size() != weights.size()) throw DimensionError("one distribution per weight required");
  for (const auto& p : probs) {
    if (p.size() != actions()) throw DimensionError("components use different action sets");
    dist::validate_weights(p);
  }
}

double discrete_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

DiscreteEntropyTerms discrete_entropy_terms(const DiscreteMixture& m) {
  m.validate();
  const std::size_t n = m.weights.size();
  const std::size_t k = m.actions();
  DiscreteEntropyTerms t;
  std::vector<double> marginal(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < k; ++a) marginal[a] += m.weights[i] * m.probs[i][a];
  }
  t.mixture = discrete_entropy(marginal);
  t.weights = discrete_entropy(m.weights);
  for (std::size_t i = 0; i < n; ++i) t.conditional += m.weights[i] * discrete_entropy(m.probs[i]);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      const double joint = m.weights[i] * m.probs[i][a];
      if (joint <= 0.0) continue;
      t.joint -= joint * std::log(joint);
      t.weights_given_action -= joint * std::log(joint / marginal[a]);
    }
  }
  return t;
}

}  // namespace mixent::entropy
