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

#include <span>
#include <vector>

namespace mixent::entropy {

/// Mixture of categorical distributions over a finite action set, small
/// enough that every entropy term can be enumerated.
struct DiscreteMixture {
  std::vector<double> weights;
  std::vector<std::vector<double>> probs;  // probs[i][a] = pi_i(a)

  void validate() const;
  std::size_t actions() const { return probs.empty() ? 0 : probs.front().size(); }
};

struct DiscreteEntropyTerms {
  double mixture = 0.0;            // H(pi)
  double conditional = 0.0;        // H(pi|W)
  double weights = 0.0;            // H(W)
  double weights_given_action = 0.0;  // H(W|pi)
  double joint = 0.0;              // H(pi, W), from the joint table directly
};

double discrete_entropy(std::span<const double> p);

/// All terms by enumeration of the joint table p(w, a) = w_i pi_i(a).
DiscreteEntropyTerms discrete_entropy_terms(const DiscreteMixture& m);

}  // namespace mixent::entropy
