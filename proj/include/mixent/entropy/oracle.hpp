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

enum class OracleMethod { kQuadrature, kMonteCarlo };

struct OracleResult {
  double value = 0.0;
  double stderr_ = 0.0;  // 0 for quadrature
};

inline constexpr std::size_t kQuadraturePoints1d = std::size_t{1} << 16;
inline constexpr std::size_t kQuadraturePoints2d = std::size_t{1} << 9;  // per axis
inline constexpr double kQuadratureEnvelope = 8.0;                       // in stddevs

/// Ground-truth differential entropy of an (unsquashed) Gaussian mixture.
///
/// Quadrature: trapezoid rule for -p log p on a uniform grid spanning, per
/// axis, kQuadratureEnvelope stddevs beyond the outermost component. `budget`
/// is the number of grid points per axis (0 selects the defaults above). Only
/// dimensions 1 and 2 are supported; anything else throws ContractError.
///
/// Monte Carlo: average of -log p(a) over `budget` mixture samples, with the
/// standard error of that mean.
OracleResult mixture_entropy_oracle(const dist::MixtureSpec& m, OracleMethod method,
                                    std::size_t budget, Rng& rng);

OracleResult quadrature_entropy(const dist::MixtureSpec& m, std::size_t points_per_axis = 0);
OracleResult monte_carlo_entropy(const dist::MixtureSpec& m, std::size_t samples, Rng& rng);

}  // namespace mixent::entropy
