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

#include "mixent/entropy/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mixent/common/error.hpp"

namespace mixent::entropy {
namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

// -log sum_j w_j exp(-D_ij), skipping zero weights and "infinite" distances.
double neg_log_overlap(std::span<const double> w, const KlMatrix& d, std::size_t i) {
  std::vector<double> terms;
  terms.reserve(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] <= 0.0 || d(i, j) > kInfiniteDistance) continue;
    terms.push_back(std::log(w[j]) - d(i, j));
  }
  return -dist::logsumexp(terms);
}

}  // namespace

KlMatrix::KlMatrix(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  require_same_length(values_.size(), n * n, "KlMatrix");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = values_[i * n + j];
      if (!(v >= 0.0) || std::isnan(v)) {
        throw ContractError("distance (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") = " + std::to_string(v) + " is negative");
      }
      if (i == j && v != 0.0) throw ContractError("distance matrix diagonal must be zero");
    }
  }
}

KlMatrix KlMatrix::from_mixture(const dist::MixtureSpec& m) {
  const std::size_t n = m.size();
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) v[i * n + j] = dist::gaussian_kl(m.components[i], m.components[j]);
    }
  }
  return KlMatrix(n, std::move(v));
}

KlMatrix KlMatrix::scaled(double t) const {
  std::vector<double> v = values_;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (i != j) v[i * n_ + j] *= t;
    }
  }
  return KlMatrix(n_, std::move(v));
}

double weight_entropy(std::span<const double> w) {
  dist::validate_weights(w);
  double h = 0.0;
  for (double x : w) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

double conditional_entropy(std::span<const double> w, std::span<const double> entropies) {
  require_same_length(w.size(), entropies.size(), "conditional_entropy");
  double h = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) h += w[i] * entropies[i];
  return h;
}

std::vector<double> component_entropies(const dist::MixtureSpec& m) {
  std::vector<double> h;
  h.reserve(m.size());
  for (const auto& g : m.components) h.push_back(dist::gaussian_entropy(g));
  return h;
}

double pairwise_estimator(std::span<const double> w, std::span<const double> entropies,
                          const KlMatrix& distances) {
  dist::validate_weights(w);
  require_same_length(w.size(), entropies.size(), "pairwise_estimator");
  require_same_length(w.size(), distances.size(), "pairwise_estimator");
  double correction = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) correction += w[i] * neg_log_overlap(w, distances, i);
  }
  return conditional_entropy(w, entropies) + correction;
}

double pairwise_estimator(const dist::MixtureSpec& m) {
  m.validate();
  return pairwise_estimator(m.weights, component_entropies(m), KlMatrix::from_mixture(m));
}

LogDensityMatrix log_density_matrix(const dist::MixtureSpec& m,
                                    const std::vector<std::vector<double>>& samples,
                                    const dist::ActionBox& box, dist::Squash squash) {
  require_same_length(samples.size(), m.size(), "log_density_matrix samples");
  LogDensityMatrix out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::vector<double> lp = dist::component_log_probs(m, samples[i], box, squash);
    for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = lp[j];
  }
  return out;
}

double mixed_marginal_entropy(std::span<const double> w, const LogDensityMatrix& log_density,
                              std::size_t i) {
  std::vector<double> terms;
  terms.reserve(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] <= 0.0) continue;
    const double lp = log_density(i, j);
    if (std::isnan(lp) || lp == std::numeric_limits<double>::infinity()) {
      throw EstimatorError("non-finite log density at sample " + std::to_string(i) +
                           ", component " + std::to_string(j));
    }
    terms.push_back(std::log(w[j]) + lp);
  }
  const double h = -dist::logsumexp(terms);
  if (!std::isfinite(h)) {
    throw EstimatorError("mixture assigns zero density to sample " + std::to_string(i));
  }
  return h;
}

double sampled_estimator(std::span<const double> w, const LogDensityMatrix& log_density) {
  require_same_length(w.size(), log_density.size(), "sampled_estimator");
  double h = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) h += w[i] * mixed_marginal_entropy(w, log_density, i);
  }
  return h;
}

double sampled_estimator(const dist::MixtureSpec& m, const std::vector<std::vector<double>>& samples,
                         const dist::ActionBox& box, dist::Squash squash) {
  m.validate();
  return sampled_estimator(m.weights, log_density_matrix(m, samples, box, squash));
}

double two_sample_estimator(const dist::MixtureSpec& m,
                            const std::vector<std::vector<double>>& marginal_samples,
                            const std::vector<std::vector<double>>& cross_samples,
                            const dist::ActionBox& box, dist::Squash squash) {
  m.validate();
  require_same_length(marginal_samples.size(), m.size(), "two_sample_estimator");
  const LogDensityMatrix cross = log_density_matrix(m, cross_samples, box, squash);
  double h = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double w = m.weights[i];
    if (w <= 0.0) continue;
    const double marginal = dist::log_prob(m.components[i], marginal_samples[i], box, squash);
    if (!std::isfinite(marginal)) throw EstimatorError("non-finite marginal log density");
    h += w * (-marginal + mixed_marginal_entropy(m.weights, cross, i) + cross(i, i));
  }
  return h;
}

double appendix_lower_bound(const dist::MixtureSpec& m) {
  m.validate();
  const std::vector<double> h = component_entropies(m);
  double extra = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
      row += std::exp(-dist::gaussian_cross_entropy(m.components[i], m.components[j]));
    }
    extra += m.weights[i] * row;
  }
  return conditional_entropy(m.weights, h) + extra;
}

double complementary_mixture_distance(const dist::MixtureSpec& m, std::size_t i) {
  m.validate();
  if (m.size() < 2) throw ContractError("complementary mixture needs at least two components");
  if (i >= m.size()) throw ContractError("component index out of range");
  double d = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (j != i) d += m.weights[j] * dist::gaussian_kl(m.components[i], m.components[j]);
  }
  return d;
}

double log_sum_inequality_gap(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size(), "log_sum_inequality_gap");
  double lhs = 0.0;
  double sa = 0.0;
  double sb = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!(a[j] > 0.0) || !(b[j] > 0.0)) throw ContractError("log-sum inequality needs positive inputs");
    lhs += a[j] * std::log(a[j] / b[j]);
    sa += a[j];
    sb += b[j];
  }
  return lhs - sa * std::log(sa / sb);
}

}  // namespace mixent::entropy
