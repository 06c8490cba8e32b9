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

#include "mixent/entropy/report.hpp"

#include <cmath>

#include "mixent/common/error.hpp"
#include "mixent/entropy/estimators.hpp"

namespace mixent::entropy {

OracleMode parse_oracle_mode(std::string_view name) {
  if (name == "off" || name == "none") return OracleMode::kOff;
  if (name == "quadrature") return OracleMode::kQuadrature;
  if (name == "mc") return OracleMode::kMonteCarlo;
  if (name == "auto") return OracleMode::kAuto;
  throw ConfigError("unknown oracle mode '" + std::string(name) + "' (off|quadrature|mc|auto)");
}

std::string_view oracle_mode_name(OracleMode mode) {
  switch (mode) {
    case OracleMode::kOff: return "off";
    case OracleMode::kQuadrature: return "quadrature";
    case OracleMode::kMonteCarlo: return "mc";
    case OracleMode::kAuto: return "auto";
  }
  return "off";
}

EntropyReport entropy_report(const dist::MixtureSpec& m, const ReportOptions& options, Rng& rng) {
  m.validate();
  EntropyReport r;
  const auto h = component_entropies(m);
  r.cond_lower = conditional_entropy(m.weights, h);
  r.weight_entropy = weight_entropy(m.weights);
  r.joint_upper = r.cond_lower + r.weight_entropy;
  r.pairwise = pairwise_estimator(m.weights, h, KlMatrix::from_mixture(m));

  if (options.sampled_sets > 0) {
    double mean = 0.0;
    double m2 = 0.0;
    std::vector<std::vector<double>> samples(m.size());
    for (std::size_t n = 0; n < options.sampled_sets; ++n) {
      for (std::size_t i = 0; i < m.size(); ++i) samples[i] = dist::sample_gaussian(m.components[i], rng);
      const double x = sampled_estimator(m, samples);
      const double delta = x - mean;
      mean += delta / static_cast<double>(n + 1);
      m2 += delta * (x - mean);
    }
    r.sampled = mean;
    if (options.sampled_sets > 1) {
      r.sampled_stderr = std::sqrt(m2 / static_cast<double>(options.sampled_sets - 1) /
                                   static_cast<double>(options.sampled_sets));
    }
  }

  OracleMode mode = options.oracle;
  if (mode == OracleMode::kAuto) mode = m.dim() <= 2 ? OracleMode::kQuadrature : OracleMode::kMonteCarlo;
  if (mode == OracleMode::kQuadrature) {
    r.oracle = quadrature_entropy(m, options.quadrature_points);
    r.oracle_method = OracleMethod::kQuadrature;
  } else if (mode == OracleMode::kMonteCarlo) {
    r.oracle = monte_carlo_entropy(m, options.mc_samples, rng);
    r.oracle_method = OracleMethod::kMonteCarlo;
  }
  return r;
}

InvariantOutcome check_invariants(const EntropyReport& r, double tolerance) {
  InvariantOutcome out;
  out.sandwich = r.cond_lower <= r.pairwise + tolerance && r.pairwise <= r.joint_upper + tolerance;
  out.gap = std::abs((r.joint_upper - r.cond_lower) - r.weight_entropy) <= tolerance;
  if (r.oracle) {
    out.bias = std::abs(r.pairwise - r.oracle->value) <=
               r.weight_entropy + 3.0 * r.oracle->stderr_ + tolerance;
  }
  return out;
}

std::string InvariantOutcome::describe() const {
  std::string s;
  if (!sandwich) s += "sandwich bound violated; ";
  if (!gap) s += "joint-conditional gap differs from H(W); ";
  if (!bias) s += "bias bound violated; ";
  return s.empty() ? "ok" : s;
}

}  // namespace mixent::entropy
