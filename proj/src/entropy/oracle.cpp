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

#include "mixent/entropy/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mixent/common/error.hpp"

namespace mixent::entropy {
namespace {

struct Axis {
  double lo;
  double step;
  std::size_t points;
};

Axis envelope(const dist::MixtureSpec& m, std::size_t k, std::size_t points) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.weights[i] <= 0.0) continue;
    const double s = m.components[i].stddev(k);
    lo = std::min(lo, m.components[i].mean[k] - kQuadratureEnvelope * s);
    hi = std::max(hi, m.components[i].mean[k] + kQuadratureEnvelope * s);
  }
  return Axis{lo, (hi - lo) / static_cast<double>(points - 1), points};
}

// Per-axis, per-component log density tables: table[j][p] for grid point p.
std::vector<std::vector<double>> axis_log_densities(const dist::MixtureSpec& m, std::size_t k,
                                                    const Axis& axis) {
  std::vector<std::vector<double>> table(m.size(), std::vector<double>(axis.points));
  for (std::size_t j = 0; j < m.size(); ++j) {
    const auto& g = m.components[j];
    const double inv_s = std::exp(-g.log_std[k]);
    for (std::size_t p = 0; p < axis.points; ++p) {
      const double z = (axis.lo + static_cast<double>(p) * axis.step - g.mean[k]) * inv_s;
      table[j][p] = -0.5 * z * z - g.log_std[k] - dist::kLogSqrt2Pi;
    }
  }
  return table;
}

double trapezoid_weight(std::size_t p, std::size_t points) {
  return (p == 0 || p + 1 == points) ? 0.5 : 1.0;
}

// -p log p from the component log densities (already offset by log w_j).
double neg_p_log_p(std::span<const double> weighted_log_densities) {
  const double lp = dist::logsumexp(weighted_log_densities);
  if (lp < -745.0) return 0.0;
  return -std::exp(lp) * lp;
}

}  // namespace

OracleResult quadrature_entropy(const dist::MixtureSpec& m, std::size_t points_per_axis) {
  m.validate();
  const std::size_t d = m.dim();
  if (d != 1 && d != 2) {
    throw ContractError("quadrature oracle supports dimension 1 or 2, got " + std::to_string(d));
  }
  const std::size_t points =
      points_per_axis ? points_per_axis : (d == 1 ? kQuadraturePoints1d : kQuadraturePoints2d);
  if (points < 3) throw ContractError("quadrature needs at least 3 points per axis");

  std::vector<std::size_t> active;
  std::vector<double> log_w;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m.weights[j] > 0.0) {
      active.push_back(j);
      log_w.push_back(std::log(m.weights[j]));
    }
  }
  std::vector<double> terms(active.size());

  if (d == 1) {
    const Axis ax = envelope(m, 0, points);
    const auto table = axis_log_densities(m, 0, ax);
    double total = 0.0;
    for (std::size_t p = 0; p < points; ++p) {
      for (std::size_t a = 0; a < active.size(); ++a) terms[a] = log_w[a] + table[active[a]][p];
      total += trapezoid_weight(p, points) * neg_p_log_p(terms);
    }
    return OracleResult{total * ax.step, 0.0};
  }

  const Axis ax = envelope(m, 0, points);
  const Axis ay = envelope(m, 1, points);
  const auto tx = axis_log_densities(m, 0, ax);
  const auto ty = axis_log_densities(m, 1, ay);
  double total = 0.0;
  for (std::size_t p = 0; p < points; ++p) {
    double row = 0.0;
    for (std::size_t q = 0; q < points; ++q) {
      for (std::size_t a = 0; a < active.size(); ++a) {
        terms[a] = log_w[a] + tx[active[a]][p] + ty[active[a]][q];
      }
      row += trapezoid_weight(q, points) * neg_p_log_p(terms);
    }
    total += trapezoid_weight(p, points) * row;
  }
  return OracleResult{total * ax.step * ay.step, 0.0};
}

OracleResult monte_carlo_entropy(const dist::MixtureSpec& m, std::size_t samples, Rng& rng) {
  m.validate();
  if (samples < 2) throw ContractError("Monte Carlo oracle needs at least 2 samples");
  const std::size_t n_comp = m.size();
  const std::size_t d = m.dim();
  // Hot loop: 10^6 draws per mixture, so buffers are hoisted and the
  // per-component normalizers precomputed.
  std::vector<double> log_norm(n_comp);
  std::vector<double> inv_std(n_comp * d);
  for (std::size_t j = 0; j < n_comp; ++j) {
    double c = m.weights[j] > 0.0 ? std::log(m.weights[j]) : -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < d; ++k) {
      c -= m.components[j].log_std[k] + dist::kLogSqrt2Pi;
      inv_std[j * d + k] = std::exp(-m.components[j].log_std[k]);
    }
    log_norm[j] = c;
  }
  std::vector<double> a(d);
  std::vector<double> terms(n_comp);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    const auto& g = m.components[dist::sample_index(m.weights, rng)];
    for (std::size_t k = 0; k < d; ++k) a[k] = g.mean[k] + g.stddev(k) * rng.normal();
    for (std::size_t j = 0; j < n_comp; ++j) {
      double q = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double z = (a[k] - m.components[j].mean[k]) * inv_std[j * d + k];
        q += z * z;
      }
      terms[j] = log_norm[j] - 0.5 * q;
    }
    const double x = -dist::logsumexp(terms);
    const double delta = x - mean;
    mean += delta / static_cast<double>(n + 1);
    m2 += delta * (x - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return OracleResult{mean, std::sqrt(var / static_cast<double>(samples))};
}

OracleResult mixture_entropy_oracle(const dist::MixtureSpec& m, OracleMethod method,
                                    std::size_t budget, Rng& rng) {
  if (method == OracleMethod::kQuadrature) return quadrature_entropy(m, budget);
  return monte_carlo_entropy(m, budget ? budget : 1000000, rng);
}

}  // namespace mixent::entropy
