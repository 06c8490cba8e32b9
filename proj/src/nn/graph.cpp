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

#include "mixent/nn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mixent/common/error.hpp"
#include "mixent/simd/kernels.hpp"

namespace mixent::nn {
namespace {

enum Broadcast : std::size_t { kSame = 0, kRow = 1, kCol = 2, kScalar = 3 };

constexpr double kLn2 = 0.69314718055994530942;

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

Broadcast classify(const Tensor& a, const Tensor& b, OpKind op) {
  if (a.rank() != 2 || b.rank() != 2) {
    throw DimensionError(std::string(op_name(op)) + " needs rank-2 operands");
  }
  if (a.same_shape(b)) return kSame;
  if (b.rows() == 1 && b.cols() == 1) return kScalar;
  if (b.rows() == 1 && b.cols() == a.cols()) return kRow;
  if (b.cols() == 1 && b.rows() == a.rows()) return kCol;
  throw DimensionError(std::string(op_name(op)) + ": cannot broadcast " + b.shape_string() +
                       " onto " + a.shape_string());
}

inline double bval(const Tensor& b, Broadcast kind, std::size_t r, std::size_t c) {
  switch (kind) {
    case kSame: return b(r, c);
    case kRow: return b(0, c);
    case kCol: return b(r, 0);
    case kScalar: return b[0];
  }
  return 0.0;
}

void accumulate(Tensor& slot, Tensor&& contribution) {
  if (slot.size() == 0) {
    slot = std::move(contribution);
  } else {
    simd::axpy(1.0, contribution.data(), slot.data());
  }
}

// Sums a full-shape adjoint down to the broadcast operand's shape.
Tensor reduce_to(const Tensor& full, Broadcast kind, const std::vector<std::size_t>& shape) {
  if (kind == kSame) return full;
  Tensor out(shape);
  const std::size_t m = full.rows();
  const std::size_t n = full.cols();
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double g = full(r, c);
      switch (kind) {
        case kRow: out(0, c) += g; break;
        case kCol: out(r, 0) += g; break;
        case kScalar: out[0] += g; break;
        case kSame: break;
      }
    }
  }
  return out;
}

}  // namespace

std::string_view op_name(OpKind op) {
  switch (op) {
    case OpKind::kLeaf: return "leaf";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kScale: return "scale";
    case OpKind::kAddScalar: return "add_scalar";
    case OpKind::kRelu: return "relu";
    case OpKind::kTanh: return "tanh";
    case OpKind::kExp: return "exp";
    case OpKind::kLog: return "log";
    case OpKind::kSquare: return "square";
    case OpKind::kLog1mTanh2: return "log1m_tanh2";
    case OpKind::kClamp: return "clamp";
    case OpKind::kSliceCols: return "slice_cols";
    case OpKind::kSliceRows: return "slice_rows";
    case OpKind::kConcatCols: return "concat_cols";
    case OpKind::kConcatRows: return "concat_rows";
    case OpKind::kSumCols: return "sum_cols";
    case OpKind::kSum: return "sum";
    case OpKind::kMean: return "mean";
    case OpKind::kLogSumExpCols: return "logsumexp_cols";
  }
  return "?";
}

const Tensor& Gradients::at(Var v) const {
  auto it = grads_.find(v.id);
  if (it == grads_.end()) {
    throw ContractError("no gradient recorded for node " + std::to_string(v.id));
  }
  return it->second;
}

Var Graph::push(Node node) {
  if (!node.value.all_finite()) {
    throw NonFiniteError("non-finite output from " + std::string(op_name(node.op)) + " (node " +
                         std::to_string(nodes_.size()) + ")");
  }
  nodes_.push_back(std::move(node));
  return Var{nodes_.size() - 1};
}

Var Graph::leaf(Tensor value, bool requires_grad) {
  if (value.rank() != 2) throw DimensionError("graph leaves must be rank-2, got " + value.shape_string());
  Node n;
  n.op = OpKind::kLeaf;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  return push(std::move(n));
}

Var Graph::constant(Tensor value) { return leaf(std::move(value), false); }
Var Graph::parameter(Tensor value) { return leaf(std::move(value), true); }

Var Graph::unary(OpKind op, Var a, Tensor value) {
  Node n;
  n.op = op;
  n.inputs = {a.id};
  n.value = std::move(value);
  n.requires_grad = nodes_[a.id].requires_grad;
  return push(std::move(n));
}

Var Graph::matmul(Var a, Var b) {
  const Tensor& x = value(a);
  const Tensor& w = value(b);
  if (x.rank() != 2 || w.rank() != 2 || x.cols() != w.rows()) {
    throw DimensionError("matmul shape mismatch: " + x.shape_string() + " x " + w.shape_string());
  }
  Tensor out = Tensor::matrix(x.rows(), w.cols());
  simd::gemm_acc(x.data(), w.data(), out.data(), x.rows(), x.cols(), w.cols());
  Node n;
  n.op = OpKind::kMatMul;
  n.inputs = {a.id, b.id};
  n.value = std::move(out);
  n.requires_grad = nodes_[a.id].requires_grad || nodes_[b.id].requires_grad;
  return push(std::move(n));
}

Var Graph::binary_broadcast(OpKind op, Var a, Var b) {
  const Tensor& x = value(a);
  const Tensor& y = value(b);
  const Broadcast kind = classify(x, y, op);
  Tensor out(x.shape());
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double u = x(r, c);
      const double v = bval(y, kind, r, c);
      out(r, c) = op == OpKind::kAdd ? u + v : op == OpKind::kSub ? u - v : u * v;
    }
  }
  Node node;
  node.op = op;
  node.inputs = {a.id, b.id};
  node.value = std::move(out);
  node.i0 = kind;
  node.requires_grad = nodes_[a.id].requires_grad || nodes_[b.id].requires_grad;
  return push(std::move(node));
}

Var Graph::add(Var a, Var b) { return binary_broadcast(OpKind::kAdd, a, b); }
Var Graph::sub(Var a, Var b) { return binary_broadcast(OpKind::kSub, a, b); }
Var Graph::mul(Var a, Var b) { return binary_broadcast(OpKind::kMul, a, b); }

Var Graph::scale(Var a, double factor) {
  Tensor out = value(a);
  for (double& x : out.data()) x *= factor;
  Var v = unary(OpKind::kScale, a, std::move(out));
  nodes_[v.id].p0 = factor;
  return v;
}

Var Graph::add_scalar(Var a, double offset) {
  Tensor out = value(a);
  for (double& x : out.data()) x += offset;
  return unary(OpKind::kAddScalar, a, std::move(out));
}

Var Graph::relu(Var a) {
  Tensor out = value(a);
  for (double& x : out.data()) x = x > 0.0 ? x : 0.0;
  return unary(OpKind::kRelu, a, std::move(out));
}

Var Graph::tanh(Var a) {
  Tensor out = value(a);
  for (double& x : out.data()) x = std::tanh(x);
  return unary(OpKind::kTanh, a, std::move(out));
}

Var Graph::exp(Var a) {
  Tensor out = value(a);
  for (double& x : out.data()) x = std::exp(x);
  return unary(OpKind::kExp, a, std::move(out));
}

Var Graph::log(Var a) {
  Tensor out = value(a);
  for (double& x : out.data()) x = std::log(x);
  return unary(OpKind::kLog, a, std::move(out));
}

Var Graph::square(Var a) {
  Tensor out = value(a);
  for (double& x : out.data()) x = x * x;
  return unary(OpKind::kSquare, a, std::move(out));
}

Var Graph::log1m_tanh2(Var a) {
  Tensor out = value(a);
  for (double& x : out.data()) x = 2.0 * (kLn2 - x - softplus(-2.0 * x));
  return unary(OpKind::kLog1mTanh2, a, std::move(out));
}

Var Graph::clamp(Var a, double lo, double hi) {
  if (!(lo <= hi)) throw ContractError("clamp bounds out of order");
  Tensor out = value(a);
  for (double& x : out.data()) x = std::clamp(x, lo, hi);
  Var v = unary(OpKind::kClamp, a, std::move(out));
  nodes_[v.id].p0 = lo;
  nodes_[v.id].p1 = hi;
  return v;
}

Var Graph::slice_cols(Var a, std::size_t begin, std::size_t end) {
  const Tensor& x = value(a);
  if (begin >= end || end > x.cols()) {
    throw DimensionError("slice_cols [" + std::to_string(begin) + ", " + std::to_string(end) +
                         ") out of range for " + x.shape_string());
  }
  Tensor out = Tensor::matrix(x.rows(), end - begin);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::copy(x.row_span(r).begin() + begin, x.row_span(r).begin() + end, out.row_span(r).begin());
  }
  Var v = unary(OpKind::kSliceCols, a, std::move(out));
  nodes_[v.id].i0 = begin;
  nodes_[v.id].i1 = end;
  return v;
}

Var Graph::slice_rows(Var a, std::size_t begin, std::size_t end) {
  const Tensor& x = value(a);
  if (begin >= end || end > x.rows()) {
    throw DimensionError("slice_rows [" + std::to_string(begin) + ", " + std::to_string(end) +
                         ") out of range for " + x.shape_string());
  }
  const std::size_t c = x.cols();
  std::vector<double> data(x.data().begin() + begin * c, x.data().begin() + end * c);
  Var v = unary(OpKind::kSliceRows, a, Tensor({end - begin, c}, std::move(data)));
  nodes_[v.id].i0 = begin;
  nodes_[v.id].i1 = end;
  return v;
}

Var Graph::concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw ContractError("concat_cols needs at least one input");
  const std::size_t m = value(parts[0]).rows();
  std::size_t total = 0;
  for (Var p : parts) {
    if (value(p).rows() != m) throw DimensionError("concat_cols row mismatch");
    total += value(p).cols();
  }
  Tensor out = Tensor::matrix(m, total);
  Node n;
  n.op = OpKind::kConcatCols;
  std::size_t offset = 0;
  for (Var p : parts) {
    const Tensor& x = value(p);
    for (std::size_t r = 0; r < m; ++r) {
      std::copy(x.row_span(r).begin(), x.row_span(r).end(), out.row_span(r).begin() + offset);
    }
    offset += x.cols();
    n.inputs.push_back(p.id);
    n.requires_grad = n.requires_grad || nodes_[p.id].requires_grad;
  }
  n.value = std::move(out);
  return push(std::move(n));
}

Var Graph::concat_rows(const std::vector<Var>& parts) {
  if (parts.empty()) throw ContractError("concat_rows needs at least one input");
  const std::size_t c = value(parts[0]).cols();
  std::vector<double> data;
  std::size_t rows = 0;
  Node n;
  n.op = OpKind::kConcatRows;
  for (Var p : parts) {
    const Tensor& x = value(p);
    if (x.cols() != c) throw DimensionError("concat_rows column mismatch");
    data.insert(data.end(), x.data().begin(), x.data().end());
    rows += x.rows();
    n.inputs.push_back(p.id);
    n.requires_grad = n.requires_grad || nodes_[p.id].requires_grad;
  }
  n.value = Tensor({rows, c}, std::move(data));
  return push(std::move(n));
}

Var Graph::sum_cols(Var a) {
  const Tensor& x = value(a);
  Tensor out = Tensor::matrix(x.rows(), 1);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double s = 0.0;
    for (double v : x.row_span(r)) s += v;
    out(r, 0) = s;
  }
  return unary(OpKind::kSumCols, a, std::move(out));
}

Var Graph::sum(Var a) {
  double s = 0.0;
  for (double v : value(a).data()) s += v;
  return unary(OpKind::kSum, a, Tensor::scalar(s));
}

Var Graph::mean(Var a) {
  const Tensor& x = value(a);
  if (x.size() == 0) throw ContractError("mean of empty tensor");
  double s = 0.0;
  for (double v : x.data()) s += v;
  return unary(OpKind::kMean, a, Tensor::scalar(s / static_cast<double>(x.size())));
}

Var Graph::logsumexp_cols(Var a) {
  const Tensor& x = value(a);
  Tensor out = Tensor::matrix(x.rows(), 1);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto row = x.row_span(r);
    const double mx = *std::max_element(row.begin(), row.end());
    double s = 0.0;
    for (double v : row) s += std::exp(v - mx);
    out(r, 0) = mx + std::log(s);
  }
  return unary(OpKind::kLogSumExpCols, a, std::move(out));
}

Gradients Graph::backward(Var output) const {
  const Tensor& out = value(output);
  if (out.size() != 1) {
    throw ContractError("backward needs a scalar output, got shape " + out.shape_string());
  }
  Gradients result;
  if (!nodes_[output.id].requires_grad) return result;
  std::vector<Tensor> adj(output.id + 1);
  adj[output.id] = Tensor::scalar(1.0);
  for (std::size_t id = output.id + 1; id-- > 0;) {
    if (adj[id].size() == 0) continue;
    const Node& node = nodes_[id];
    if (node.op == OpKind::kLeaf) {
      if (node.requires_grad) result.grads_.emplace(id, std::move(adj[id]));
      continue;
    }
    backprop_node(id, adj);
    adj[id] = Tensor();
  }
  return result;
}

void Graph::backprop_node(std::size_t id, std::vector<Tensor>& adj) const {
  const Node& node = nodes_[id];
  const Tensor& g = adj[id];
  const Tensor& y = node.value;
  auto wants = [&](std::size_t k) { return nodes_[node.inputs[k]].requires_grad; };
  auto input = [&](std::size_t k) -> const Tensor& { return nodes_[node.inputs[k]].value; };
  auto elementwise = [&](auto&& derivative) {
    const Tensor& x = input(0);
    Tensor d(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = g[i] * derivative(x[i], y[i]);
    accumulate(adj[node.inputs[0]], std::move(d));
  };

  switch (node.op) {
    case OpKind::kLeaf:
      break;
    case OpKind::kMatMul: {
      const Tensor& a = input(0);
      const Tensor& b = input(1);
      if (wants(0)) {
        const Tensor bt = b.transposed();
        Tensor da = Tensor::matrix(a.rows(), a.cols());
        simd::gemm_acc(g.data(), bt.data(), da.data(), g.rows(), g.cols(), a.cols());
        accumulate(adj[node.inputs[0]], std::move(da));
      }
      if (wants(1)) {
        const Tensor at = a.transposed();
        Tensor db = Tensor::matrix(b.rows(), b.cols());
        simd::gemm_acc(at.data(), g.data(), db.data(), at.rows(), at.cols(), g.cols());
        accumulate(adj[node.inputs[1]], std::move(db));
      }
      break;
    }
    case OpKind::kAdd:
    case OpKind::kSub:
    case OpKind::kMul: {
      const auto kind = static_cast<Broadcast>(node.i0);
      const Tensor& a = input(0);
      const Tensor& b = input(1);
      if (wants(0)) {
        Tensor da = g;
        if (node.op == OpKind::kMul) {
          for (std::size_t r = 0; r < a.rows(); ++r) {
            for (std::size_t c = 0; c < a.cols(); ++c) da(r, c) *= bval(b, kind, r, c);
          }
        }
        accumulate(adj[node.inputs[0]], std::move(da));
      }
      if (wants(1)) {
        Tensor full = g;
        if (node.op == OpKind::kSub) {
          for (double& v : full.data()) v = -v;
        } else if (node.op == OpKind::kMul) {
          for (std::size_t i = 0; i < full.size(); ++i) full[i] *= a[i];
        }
        accumulate(adj[node.inputs[1]], reduce_to(full, kind, b.shape()));
      }
      break;
    }
    case OpKind::kScale: {
      const double f = node.p0;
      elementwise([f](double, double) { return f; });
      break;
    }
    case OpKind::kAddScalar:
      elementwise([](double, double) { return 1.0; });
      break;
    case OpKind::kRelu:
      elementwise([](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
      break;
    case OpKind::kTanh:
      elementwise([](double, double t) { return 1.0 - t * t; });
      break;
    case OpKind::kExp:
      elementwise([](double, double e) { return e; });
      break;
    case OpKind::kLog:
      elementwise([](double x, double) { return 1.0 / x; });
      break;
    case OpKind::kSquare:
      elementwise([](double x, double) { return 2.0 * x; });
      break;
    case OpKind::kLog1mTanh2:
      elementwise([](double x, double) { return -2.0 * std::tanh(x); });
      break;
    case OpKind::kClamp: {
      const double lo = node.p0;
      const double hi = node.p1;
      elementwise([lo, hi](double x, double) { return (x > lo && x < hi) ? 1.0 : 0.0; });
      break;
    }
    case OpKind::kSliceCols: {
      const Tensor& x = input(0);
      Tensor d(x.shape());
      for (std::size_t r = 0; r < x.rows(); ++r) {
        std::copy(g.row_span(r).begin(), g.row_span(r).end(), d.row_span(r).begin() + node.i0);
      }
      accumulate(adj[node.inputs[0]], std::move(d));
      break;
    }
    case OpKind::kSliceRows: {
      const Tensor& x = input(0);
      Tensor d(x.shape());
      std::copy(g.data().begin(), g.data().end(), d.data().begin() + node.i0 * x.cols());
      accumulate(adj[node.inputs[0]], std::move(d));
      break;
    }
    case OpKind::kConcatCols: {
      std::size_t offset = 0;
      for (std::size_t k = 0; k < node.inputs.size(); ++k) {
        const Tensor& x = input(k);
        if (wants(k)) {
          Tensor d(x.shape());
          for (std::size_t r = 0; r < x.rows(); ++r) {
            auto src = g.row_span(r).subspan(offset, x.cols());
            std::copy(src.begin(), src.end(), d.row_span(r).begin());
          }
          accumulate(adj[node.inputs[k]], std::move(d));
        }
        offset += x.cols();
      }
      break;
    }
    case OpKind::kConcatRows: {
      std::size_t offset = 0;
      for (std::size_t k = 0; k < node.inputs.size(); ++k) {
        const Tensor& x = input(k);
        if (wants(k)) {
          std::vector<double> d(g.data().begin() + offset, g.data().begin() + offset + x.size());
          accumulate(adj[node.inputs[k]], Tensor(x.shape(), std::move(d)));
        }
        offset += x.size();
      }
      break;
    }
    case OpKind::kSumCols: {
      const Tensor& x = input(0);
      Tensor d(x.shape());
      for (std::size_t r = 0; r < x.rows(); ++r) {
        for (double& v : d.row_span(r)) v = g(r, 0);
      }
      accumulate(adj[node.inputs[0]], std::move(d));
      break;
    }
    case OpKind::kSum:
      accumulate(adj[node.inputs[0]], Tensor(input(0).shape(), g[0]));
      break;
    case OpKind::kMean: {
      const Tensor& x = input(0);
      accumulate(adj[node.inputs[0]], Tensor(x.shape(), g[0] / static_cast<double>(x.size())));
      break;
    }
    case OpKind::kLogSumExpCols: {
      const Tensor& x = input(0);
      Tensor d(x.shape());
      for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) d(r, c) = g(r, 0) * std::exp(x(r, c) - y(r, 0));
      }
      accumulate(adj[node.inputs[0]], std::move(d));
      break;
    }
  }
}

}  // namespace mixent::nn
