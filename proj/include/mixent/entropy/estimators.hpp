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

// Mixture-entropy bounds and estimators over diagonal-Gaussian mixtures.
//
// Notation used in the comments below: H(pi|W) = sum_i w_i H(pi_i) is the
// conditional entropy, H(W) the entropy of the mixing weights and
// H(pi, W) = H(pi|W) + H(W) the joint entropy. For any nonnegative distance
// matrix D with zero diagonal the pairwise estimator
//
//   H_D = H(pi|W) - sum_i w_i log sum_j w_j exp(-D_ij)
//
// satisfies H(pi|W) <= H_D <= H(pi, W).

#include <cstddef>
#include <span>
#include <vector>

#include "mixent/dist/mixture.hpp"

namespace mixent::entropy {

/// Distances above this are treated as exp(-D) = 0.
inline constexpr double kInfiniteDistance = 700.0;

/// N x N matrix of component distances D(pi_i || pi_j). Not assumed symmetric.
class KlMatrix {
 public:
  KlMatrix() = default;
  /// Row-major values; throws ContractError on a negative or non-finite entry
  /// or a nonzero diagonal.
  KlMatrix(std::size_t n, std::vector<double> values);

  static KlMatrix from_mixture(const dist::MixtureSpec& m);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  /// Copy with every off-diagonal entry multiplied by t.
  KlMatrix scaled(double t) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// -sum w_i log w_i with 0 log 0 = 0.
double weight_entropy(std::span<const double> w);

/// sum_i w_i H_i.
double conditional_entropy(std::span<const double> w, std::span<const double> entropies);

std::vector<double> component_entropies(const dist::MixtureSpec& m);

double pairwise_estimator(std::span<const double> w, std::span<const double> entropies,
                          const KlMatrix& distances);

/// Pairwise estimator with closed-form KL as the distance.
double pairwise_estimator(const dist::MixtureSpec& m);

/// Square matrix of log densities: entry (i, j) = log pi_j(a_i), where a_i is
/// the sample drawn from component i.
class LogDensityMatrix {
 public:
  explicit LogDensityMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}
  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

LogDensityMatrix log_density_matrix(const dist::MixtureSpec& m,
                                    const std::vector<std::vector<double>>& samples,
                                    const dist::ActionBox& box, dist::Squash squash);

/// Mixed marginal entropy of component i: -log sum_j w_j pi_j(a_i).
double mixed_marginal_entropy(std::span<const double> w, const LogDensityMatrix& log_density,
                              std::size_t i);

/// One-sample estimator sum_i w_i * mixed_marginal_entropy(i). Throws
/// EstimatorError on a non-finite log density.
double sampled_estimator(std::span<const double> w, const LogDensityMatrix& log_density);

/// `samples[i]` is one draw from component i.
double sampled_estimator(const dist::MixtureSpec& m, const std::vector<std::vector<double>>& samples,
                         const dist::ActionBox& box = {}, dist::Squash squash = dist::Squash::kNone);

/// Two-sample form before the shared term cancels:
///   -sum w_i log pi_i(a~_i) - sum w_i log sum_j w_j pi_j(a^_i) + sum w_i log pi_i(a^_i)
/// With a~ == a^ this equals sampled_estimator.
double two_sample_estimator(const dist::MixtureSpec& m,
                            const std::vector<std::vector<double>>& marginal_samples,
                            const std::vector<std::vector<double>>& cross_samples,
                            const dist::ActionBox& box = {},
                            dist::Squash squash = dist::Squash::kNone);

/// H(pi|W) + sum_i w_i sum_j exp(-H(pi_i, pi_j)) with closed-form Gaussian
/// cross-entropies. Returned as a plain quantity; it is not a bound when
/// differential entropies are negative.
double appendix_lower_bound(const dist::MixtureSpec& m);

/// sum_{j != i} w_j KL(pi_i || pi_j). Throws ContractError for N < 2.
double complementary_mixture_distance(const dist::MixtureSpec& m, std::size_t i);

/// sum_j a_j log(a_j / b_j) - (sum a) log(sum a / sum b); nonnegative for
/// positive inputs.
double log_sum_inequality_gap(std::span<const double> a, std::span<const double> b);

}  // namespace mixent::entropy
