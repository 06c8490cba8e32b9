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
#include <optional>
#include <string>
#include <string_view>

#include "mixent/common/rng.hpp"
#include "mixent/dist/mixture.hpp"
#include "mixent/entropy/oracle.hpp"

namespace mixent::entropy {

enum class OracleMode {
  kOff,
  kQuadrature,
  kMonteCarlo,
  kAuto,  // quadrature for dim <= 2, Monte Carlo otherwise
};

OracleMode parse_oracle_mode(std::string_view name);
std::string_view oracle_mode_name(OracleMode mode);

struct ReportOptions {
  OracleMode oracle = OracleMode::kAuto;
  std::size_t mc_samples = 1000000;
  std::size_t quadrature_points = 0;  // 0 = defaults
  std::size_t sampled_sets = 1000;    // sample sets averaged for `sampled`
};

/// Every estimator for one mixture.
struct EntropyReport {
  double cond_lower = 0.0;      // H(pi|W)
  double joint_upper = 0.0;     // H(pi, W)
  double weight_entropy = 0.0;  // H(W)
  double pairwise = 0.0;        // H_D with closed-form KL
  double sampled = 0.0;         // mean of the one-sample estimator over sampled_sets draws
  double sampled_stderr = 0.0;
  std::optional<OracleResult> oracle;
  std::optional<OracleMethod> oracle_method;
};

EntropyReport entropy_report(const dist::MixtureSpec& m, const ReportOptions& options, Rng& rng);

struct InvariantOutcome {
  bool sandwich = true;  // cond_lower <= pairwise <= joint_upper (within tol)
  bool gap = true;       // joint_upper - cond_lower == weight_entropy (within tol)
  bool bias = true;      // |pairwise - oracle| <= weight_entropy + 3 stderr (if oracle present)
  bool ok() const { return sandwich && gap && bias; }
  std::string describe() const;
};

InvariantOutcome check_invariants(const EntropyReport& report, double tolerance = 1e-9);

}  // namespace mixent::entropy
