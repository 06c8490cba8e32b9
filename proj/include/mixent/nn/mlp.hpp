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
#include <string>
#include <string_view>
#include <vector>

#include "mixent/common/rng.hpp"
#include "mixent/nn/graph.hpp"
#include "mixent/nn/tensor.hpp"

namespace mixent::nn {

enum class Activation { kRelu, kTanh, kIdentity };

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);

/// Weight is [in, out] so a batch [B, in] multiplies on the left; bias is [1, out].
struct Layer {
  Tensor weight;
  Tensor bias;
  Activation activation = Activation::kIdentity;
};

/// How parameters enter a graph: as gradient-receiving leaves or as constants
/// (used when a network must be differentiated through but not updated).
enum class ParamMode { kTrainable, kFrozen };

/// Graph nodes of one forward pass, in parameters() order.
struct Binding {
  std::vector<Var> params;
};

class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<Layer> layers);

  /// widths = {in, h1, ..., out}. Hidden layers use `hidden`, the last layer
  /// uses `output`. Weights and biases are drawn uniformly in +-1/sqrt(fan_in).
  static Mlp make(const std::vector<std::size_t>& widths, Activation hidden, Activation output,
                  Rng& rng);

  std::size_t input_width() const;
  std::size_t output_width() const;
  std::size_t parameter_count() const;
  const std::vector<Layer>& layers() const { return layers_; }

  /// Records the forward pass in `graph`. Throws DimensionError when the input
  /// width does not match.
  Var forward(Graph& graph, Var input, ParamMode mode = ParamMode::kTrainable,
              Binding* binding = nullptr) const;

  /// Graph-free evaluation. Produces the same values as forward().
  Tensor predict(const Tensor& input) const;

  /// Weight and bias of every layer, interleaved: w0, b0, w1, b1, ...
  std::vector<Tensor*> parameters();
  std::vector<const Tensor*> parameters() const;
  std::vector<std::string> parameter_names(std::string_view prefix) const;

 private:
  std::vector<Layer> layers_;
};

}  // namespace mixent::nn
