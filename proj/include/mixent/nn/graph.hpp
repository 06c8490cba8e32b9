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
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mixent/nn/tensor.hpp"

namespace mixent::nn {

/// Handle to a node in a Graph. Only meaningful together with the graph that
/// produced it.
struct Var {
  std::size_t id = 0;
};

enum class OpKind {
  kLeaf,
  kMatMul,
  kAdd,
  kSub,
  kMul,
  kScale,
  kAddScalar,
  kRelu,
  kTanh,
  kExp,
  kLog,
  kSquare,
  kLog1mTanh2,
  kClamp,
  kSliceCols,
  kSliceRows,
  kConcatCols,
  kConcatRows,
  kSumCols,
  kSum,
  kMean,
  kLogSumExpCols,
};

std::string_view op_name(OpKind op);

/// Adjoints of the leaves that requested gradients. Leaves that were not
/// reached by backward, or that were created as constants, have no entry.
class Gradients {
 public:
  bool contains(Var v) const { return grads_.count(v.id) != 0; }
  const Tensor& at(Var v) const;
  std::size_t size() const { return grads_.size(); }

 private:
  friend class Graph;
  std::unordered_map<std::size_t, Tensor> grads_;
};

/// Dynamic reverse-mode tape. Nodes are appended in evaluation order, so node
/// ids are already a topological order and backward walks them in reverse.
///
/// Binary add/sub/mul broadcast their second operand when it is a row [1,n],
/// a column [m,1], or a scalar [1,1].
///
/// Every operation checks its output for NaN/Inf and throws NonFiniteError.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;
  Graph(Graph&&) = default;
  Graph& operator=(Graph&&) = default;

  Var constant(Tensor value);
  Var parameter(Tensor value);  // leaf that receives a gradient
  Var leaf(Tensor value, bool requires_grad);

  const Tensor& value(Var v) const { return nodes_[v.id].value; }
  bool requires_grad(Var v) const { return nodes_[v.id].requires_grad; }
  OpKind op(Var v) const { return nodes_[v.id].op; }
  std::size_t size() const { return nodes_.size(); }

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var scale(Var a, double factor);
  Var add_scalar(Var a, double offset);
  Var relu(Var a);
  Var tanh(Var a);
  Var exp(Var a);
  Var log(Var a);
  Var square(Var a);
  /// log(1 - tanh(x)^2) evaluated as 2*(log 2 - x - softplus(-2x)).
  Var log1m_tanh2(Var a);
  /// Gradient passes only where lo < x < hi.
  Var clamp(Var a, double lo, double hi);
  Var slice_cols(Var a, std::size_t begin, std::size_t end);
  Var slice_rows(Var a, std::size_t begin, std::size_t end);
  Var concat_cols(const std::vector<Var>& parts);
  Var concat_rows(const std::vector<Var>& parts);
  Var sum_cols(Var a);  // [m,n] -> [m,1]
  Var sum(Var a);       // -> [1,1]
  Var mean(Var a);      // -> [1,1]
  /// Row-wise max-shifted log-sum-exp, [m,n] -> [m,1].
  Var logsumexp_cols(Var a);

  /// Reverse sweep from a scalar node. Throws ContractError if the output is
  /// not 1x1.
  Gradients backward(Var output) const;

 private:
  struct Node {
    OpKind op = OpKind::kLeaf;
    std::vector<std::size_t> inputs;
    Tensor value;
    bool requires_grad = false;
    double p0 = 0.0;
    double p1 = 0.0;
    std::size_t i0 = 0;
    std::size_t i1 = 0;
  };

  Var push(Node node);
  Var unary(OpKind op, Var a, Tensor value);
  Var binary_broadcast(OpKind op, Var a, Var b);
  void backprop_node(std::size_t id, std::vector<Tensor>& adj) const;

  std::vector<Node> nodes_;
};

}  // namespace mixent::nn
