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

#include "mixent/nn/mlp.hpp"

#include <cmath>

#include "mixent/common/error.hpp"
#include "mixent/simd/kernels.hpp"

namespace mixent::nn {
namespace {

void apply_activation(Tensor& t, Activation a) {
  switch (a) {
    case Activation::kRelu:
      for (double& x : t.data()) x = x > 0.0 ? x : 0.0;
      break;
    case Activation::kTanh:
      for (double& x : t.data()) x = std::tanh(x);
      break;
    case Activation::kIdentity:
      break;
  }
}

}  // namespace

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kIdentity: return "identity";
  }
  return "identity";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "identity") return Activation::kIdentity;
  throw ContractError("unknown activation '" + std::string(name) + "'");
}

Mlp::Mlp(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ContractError("an Mlp needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    if (l.weight.rank() != 2 || l.bias.rank() != 2 || l.bias.rows() != 1 ||
        l.bias.cols() != l.weight.cols()) {
      throw DimensionError("layer " + std::to_string(i) + " has weight " + l.weight.shape_string() +
                           " and bias " + l.bias.shape_string());
    }
    if (i > 0 && layers_[i - 1].weight.cols() != l.weight.rows()) {
      throw DimensionError("layer " + std::to_string(i) + " input width " +
                           std::to_string(l.weight.rows()) + " does not match previous output " +
                           std::to_string(layers_[i - 1].weight.cols()));
    }
  }
}

Mlp Mlp::make(const std::vector<std::size_t>& widths, Activation hidden, Activation output,
              Rng& rng) {
  if (widths.size() < 2) throw ContractError("Mlp::make needs at least input and output widths");
  std::vector<Layer> layers;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    const std::size_t fan_in = widths[i];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Layer l;
    l.weight = Tensor::matrix(fan_in, widths[i + 1]);
    l.bias = Tensor::matrix(1, widths[i + 1]);
    for (double& w : l.weight.data()) w = rng.uniform(-bound, bound);
    for (double& b : l.bias.data()) b = rng.uniform(-bound, bound);
    l.activation = (i + 2 == widths.size()) ? output : hidden;
    layers.push_back(std::move(l));
  }
  return Mlp(std::move(layers));
}

std::size_t Mlp::input_width() const { return layers_.front().weight.rows(); }
std::size_t Mlp::output_width() const { return layers_.back().weight.cols(); }

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers_) n += l.weight.size() + l.bias.size();
  return n;
}

Var Mlp::forward(Graph& graph, Var input, ParamMode mode, Binding* binding) const {
  const Tensor& x = graph.value(input);
  if (x.rank() != 2 || x.cols() != input_width()) {
    throw DimensionError("Mlp input " + x.shape_string() + " but network expects width " +
                         std::to_string(input_width()));
  }
  const bool trainable = mode == ParamMode::kTrainable;
  Var h = input;
  for (const Layer& l : layers_) {
    Var w = graph.leaf(l.weight, trainable);
    Var b = graph.leaf(l.bias, trainable);
    if (binding) {
      binding->params.push_back(w);
      binding->params.push_back(b);
    }
    h = graph.add(graph.matmul(h, w), b);
    switch (l.activation) {
      case Activation::kRelu: h = graph.relu(h); break;
      case Activation::kTanh: h = graph.tanh(h); break;
      case Activation::kIdentity: break;
    }
  }
  return h;
}

Tensor Mlp::predict(const Tensor& input) const {
  if (input.rank() != 2 || input.cols() != input_width()) {
    throw DimensionError("Mlp input " + input.shape_string() + " but network expects width " +
                         std::to_string(input_width()));
  }
  Tensor h = input;
  for (const Layer& l : layers_) {
    Tensor out = Tensor::matrix(h.rows(), l.weight.cols());
    simd::gemm_acc(h.data(), l.weight.data(), out.data(), h.rows(), h.cols(), l.weight.cols());
    const std::size_t n = out.cols();
    for (std::size_t r = 0; r < out.rows(); ++r) {
      for (std::size_t c = 0; c < n; ++c) out(r, c) += l.bias[c];
    }
    apply_activation(out, l.activation);
    h = std::move(out);
  }
  return h;
}

std::vector<Tensor*> Mlp::parameters() {
  std::vector<Tensor*> out;
  for (Layer& l : layers_) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

std::vector<const Tensor*> Mlp::parameters() const {
  std::vector<const Tensor*> out;
  for (const Layer& l : layers_) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

std::vector<std::string> Mlp::parameter_names(std::string_view prefix) const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    names.push_back(std::string(prefix) + ".layer" + std::to_string(i) + ".weight");
    names.push_back(std::string(prefix) + ".layer" + std::to_string(i) + ".bias");
  }
  return names;
}

}  // namespace mixent::nn
