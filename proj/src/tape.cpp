// Copyright 2026 The Catchphrase Authors.
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

#include "catchphrase/tape.hpp"

#include <cmath>
#include <string>

#include "catchphrase/errors.hpp"
#include "catchphrase/kernels.hpp"

namespace catchphrase {

template <class T>
const typename Tape<T>::Node& Tape<T>::node(Var v, const char* operation) const {
  if (!v.valid() || v.id >= nodes_.size()) {
    throw StateError(std::string(operation) + ": variable is not on this tape");
  }
  return nodes_[v.id];
}

template <class T>
typename Tape<T>::Var Tape<T>::push(Op op, std::vector<std::size_t> inputs,
                                    Tensor<T> value) {
  Node n;
  n.op = op;
  for (std::size_t in : inputs) n.requires_grad |= nodes_[in].requires_grad;
  n.inputs = std::move(inputs);
  n.owned = std::move(value);
  nodes_.push_back(std::move(n));
  has_gradients_ = false;
  return Var{nodes_.size() - 1};
}

template <class T>
typename Tape<T>::Var Tape<T>::constant(Tensor<T> value) {
  return push(Op::kConstant, {}, std::move(value));
}

template <class T>
typename Tape<T>::Var Tape<T>::parameter(const Tensor<T>& value) {
  Node n;
  n.op = Op::kParameter;
  n.borrowed = &value;
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  has_gradients_ = false;
  return Var{nodes_.size() - 1};
}

template <class T>
const Tensor<T>& Tape<T>::value(Var v) const {
  return node(v, "value").value();
}

template <class T>
void Tape<T>::clear() {
  nodes_.clear();
  has_gradients_ = false;
}

template <class T>
typename Tape<T>::Var Tape<T>::matmul_nt(Var x, Var w) {
  const Tensor<T>& a = node(x, "matmul_nt").value();
  const Tensor<T>& b = node(w, "matmul_nt").value();
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_nt: shape mismatch " + a.shape_string() +
                         " vs " + b.shape_string());
  }
  Tensor<T> out(a.rows(), b.rows());
  kernels::gemm_nt(a.data(), b.data(), out.data(), a.rows(), b.rows(), a.cols());
  return push(Op::kMatmulNt, {x.id, w.id}, std::move(out));
}

template <class T>
typename Tape<T>::Var Tape<T>::add(Var a, Var b) {
  const Tensor<T>& u = node(a, "add").value();
  const Tensor<T>& v = node(b, "add").value();
  require_same_shape(u, v, "add");
  Tensor<T> out = u;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i];
  return push(Op::kAdd, {a.id, b.id}, std::move(out));
}

template <class T>
typename Tape<T>::Var Tape<T>::sub(Var a, Var b) {
  const Tensor<T>& u = node(a, "sub").value();
  const Tensor<T>& v = node(b, "sub").value();
  require_same_shape(u, v, "sub");
  Tensor<T> out = u;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= v[i];
  return push(Op::kSub, {a.id, b.id}, std::move(out));
}

template <class T>
typename Tape<T>::Var Tape<T>::add_row(Var x, Var row) {
  const Tensor<T>& u = node(x, "add_row").value();
  const Tensor<T>& r = node(row, "add_row").value();
  if (r.rows() != 1 || r.cols() != u.cols()) {
    throw DimensionError("add_row: shape mismatch " + u.shape_string() + " vs " +
                         r.shape_string());
  }
  Tensor<T> out = u;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += r[j];
  }
  return push(Op::kAddRow, {x.id, row.id}, std::move(out));
}

template <class T>
typename Tape<T>::Var Tape<T>::scale(Var x, T factor) {
  Tensor<T> out = node(x, "scale").value();
  for (auto& v : out.values()) v *= factor;
  Var result = push(Op::kScale, {x.id}, std::move(out));
  nodes_[result.id].constant = factor;
  return result;
}

template <class T>
typename Tape<T>::Var Tape<T>::relu(Var x) {
  Tensor<T> out = node(x, "relu").value();
  for (auto& v : out.values()) v = v > T(0) ? v : T(0);
  return push(Op::kRelu, {x.id}, std::move(out));
}

template <class T>
typename Tape<T>::Var Tape<T>::tanh(Var x) {
  Tensor<T> out = node(x, "tanh").value();
  for (auto& v : out.values()) v = std::tanh(v);
  return push(Op::kTanh, {x.id}, std::move(out));
}

template <class T>
typename Tape<T>::Var Tape<T>::sigmoid(Var x) {
  Tensor<T> out = node(x, "sigmoid").value();
  for (auto& v : out.values()) v = T(1) / (T(1) + std::exp(-v));
  return push(Op::kSigmoid, {x.id}, std::move(out));
}

template <class T>
typename Tape<T>::Var Tape<T>::max_over_rows(Var x) {
  const Tensor<T>& u = node(x, "max_over_rows").value();
  if (u.empty()) throw DimensionError("max_over_rows: empty input");
  Tensor<T> out(1, u.cols());
  std::vector<std::size_t> argmax(u.cols(), 0);
  for (std::size_t j = 0; j < u.cols(); ++j) {
    T best = u(0, j);
    for (std::size_t i = 1; i < u.rows(); ++i) {
      if (u(i, j) > best) {
        best = u(i, j);
        argmax[j] = i;
      }
    }
    out[j] = best;
  }
  Var result = push(Op::kMaxOverRows, {x.id}, std::move(out));
  nodes_[result.id].argmax = std::move(argmax);
  return result;
}

template <class T>
typename Tape<T>::Var Tape<T>::concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw DimensionError("concat_rows: no inputs");
  const std::size_t cols = node(parts[0], "concat_rows").value().cols();
  std::size_t rows = 0;
  std::vector<std::size_t> ids;
  for (Var p : parts) {
    const Tensor<T>& v = node(p, "concat_rows").value();
    if (v.cols() != cols) {
      throw DimensionError("concat_rows: shape mismatch " +
                           node(parts[0], "concat_rows").value().shape_string() +
                           " vs " + v.shape_string());
    }
    rows += v.rows();
    ids.push_back(p.id);
  }
  std::vector<T> data;
  data.reserve(rows * cols);
  for (Var p : parts) {
    const auto vals = node(p, "concat_rows").value().values();
    data.insert(data.end(), vals.begin(), vals.end());
  }
  return push(Op::kConcatRows, std::move(ids), Tensor<T>(rows, cols, std::move(data)));
}

template <class T>
typename Tape<T>::Var Tape<T>::concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no inputs");
  std::size_t rows = 1;
  std::size_t cols = 0;
  std::vector<std::size_t> ids;
  for (Var p : parts) {
    const Tensor<T>& v = node(p, "concat_cols").value();
    if (v.rows() != 1) {
      if (rows != 1 && rows != v.rows()) {
        throw DimensionError("concat_cols: row counts " + std::to_string(rows) +
                             " and " + std::to_string(v.rows()) + " disagree");
      }
      rows = v.rows();
    }
    cols += v.cols();
    ids.push_back(p.id);
  }
  Tensor<T> out(rows, cols);
  std::size_t offset = 0;
  for (Var p : parts) {
    const Tensor<T>& v = node(p, "concat_cols").value();
    for (std::size_t i = 0; i < rows; ++i) {
      const auto src = v.row(v.rows() == 1 ? 0 : i);
      std::copy(src.begin(), src.end(), out.row(i).begin() + offset);
    }
    offset += v.cols();
  }
  return push(Op::kConcatCols, std::move(ids), std::move(out));
}

template <class T>
typename Tape<T>::Var Tape<T>::sum(Var x) {
  T total = 0;
  for (T v : node(x, "sum").value().values()) total += v;
  return push(Op::kSum, {x.id}, Tensor<T>::scalar(total));
}

template <class T>
typename Tape<T>::Var Tape<T>::mean(Var x) {
  const Tensor<T>& u = node(x, "mean").value();
  T total = 0;
  for (T v : u.values()) total += v;
  return push(Op::kMean, {x.id}, Tensor<T>::scalar(total / static_cast<T>(u.size())));
}

template <class T>
typename Tape<T>::Var Tape<T>::pop_std(Var x) {
  const Tensor<T>& u = node(x, "pop_std").value();
  const T n = static_cast<T>(u.size());
  T total = 0;
  for (T v : u.values()) total += v;
  const T mu = total / n;
  T squares = 0;
  for (T v : u.values()) squares += (v - mu) * (v - mu);
  return push(Op::kPopStd, {x.id}, Tensor<T>::scalar(std::sqrt(squares / n)));
}

template <class T>
typename Tape<T>::Var Tape<T>::hinge(Var x, T margin) {
  Tensor<T> out = node(x, "hinge").value();
  for (auto& v : out.values()) v = margin - v > T(0) ? margin - v : T(0);
  Var result = push(Op::kHinge, {x.id}, std::move(out));
  nodes_[result.id].constant = margin;
  return result;
}

template <class T>
Tensor<T>& Tape<T>::grad_slot(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) {
    const Tensor<T>& v = n.value();
    n.grad = Tensor<T>(v.rows(), v.cols());
  }
  return n.grad;
}

template <class T>
void Tape<T>::backward(Var loss) {
  if (nodes_.empty() || !loss.valid() || loss.id >= nodes_.size()) {
    throw StateError("backward: loss was not produced by a forward pass on this tape");
  }
  const Tensor<T>& out = nodes_[loss.id].value();
  if (out.rows() != 1 || out.cols() != 1) {
    throw DimensionError("backward: loss must be 1x1, got " + out.shape_string());
  }
  for (auto& n : nodes_) n.grad = Tensor<T>();
  grad_slot(loss.id)[0] = T(1);
  for (std::size_t id = loss.id + 1; id-- > 0;) {
    if (nodes_[id].requires_grad && !nodes_[id].grad.empty()) backward_node(id);
  }
  has_gradients_ = true;
}

template <class T>
void Tape<T>::backward_node(std::size_t id) {
  // Copy what we need: grad_slot() may grow other nodes' storage but never
  // reallocates nodes_ itself.
  const Node& n = nodes_[id];
  const Tensor<T>& dy = n.grad;
  const Tensor<T>& y = n.value();
  auto wants = [&](std::size_t k) { return nodes_[n.inputs[k]].requires_grad; };

  switch (n.op) {
    case Op::kConstant:
    case Op::kParameter:
      break;
    case Op::kMatmulNt: {
      const Tensor<T>& x = nodes_[n.inputs[0]].value();
      const Tensor<T>& w = nodes_[n.inputs[1]].value();
      if (wants(0)) {
        kernels::gemm_acc_nn(dy.data(), w.data(), grad_slot(n.inputs[0]).data(),
                             dy.rows(), dy.cols(), w.cols());
      }
      if (wants(1)) {
        kernels::gemm_acc_tn(dy.data(), x.data(), grad_slot(n.inputs[1]).data(),
                             dy.rows(), dy.cols(), x.cols());
      }
      break;
    }
    case Op::kAdd:
    case Op::kSub: {
      const T sign = n.op == Op::kAdd ? T(1) : T(-1);
      if (wants(0)) {
        Tensor<T>& g = grad_slot(n.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += dy[i];
      }
      if (wants(1)) {
        Tensor<T>& g = grad_slot(n.inputs[1]);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += sign * dy[i];
      }
      break;
    }
    case Op::kAddRow: {
      if (wants(0)) {
        Tensor<T>& g = grad_slot(n.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += dy[i];
      }
      if (wants(1)) {
        Tensor<T>& g = grad_slot(n.inputs[1]);
        for (std::size_t i = 0; i < dy.rows(); ++i) {
          for (std::size_t j = 0; j < dy.cols(); ++j) g[j] += dy(i, j);
        }
      }
      break;
    }
    case Op::kScale: {
      if (wants(0)) {
        Tensor<T>& g = grad_slot(n.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += n.constant * dy[i];
      }
      break;
    }
    case Op::kRelu: {
      if (wants(0)) {
        Tensor<T>& g = grad_slot(n.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (y[i] > T(0)) g[i] += dy[i];
        }
      }
      break;
    }
    case Op::kTanh: {
      if (wants(0)) {
        Tensor<T>& g = grad_slot(n.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += dy[i] * (T(1) - y[i] * y[i]);
      }
      break;
    }
    case Op::kSigmoid: {
      if (wants(0)) {
        Tensor<T>& g = grad_slot(n.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += dy[i] * y[i] * (T(1) - y[i]);
      }
      break;
    }
    case Op::kMaxOverRows: {
      if (wants(0)) {
        Tensor<T>& g = grad_slot(n.inputs[0]);
        for (std::size_t j = 0; j < dy.cols(); ++j) g(n.argmax[j], j) += dy[j];
      }
      break;
    }
    case Op::kConcatRows: {
      std::size_t row = 0;
      for (std::size_t k = 0; k < n.inputs.size(); ++k) {
        const std::size_t rows = nodes_[n.inputs[k]].value().rows();
        if (wants(k)) {
          Tensor<T>& g = grad_slot(n.inputs[k]);
          for (std::size_t i = 0; i < g.size(); ++i) g[i] += dy[row * dy.cols() + i];
        }
        row += rows;
      }
      break;
    }
    case Op::kConcatCols: {
      std::size_t offset = 0;
      for (std::size_t k = 0; k < n.inputs.size(); ++k) {
        const Tensor<T>& part = nodes_[n.inputs[k]].value();
        if (wants(k)) {
          Tensor<T>& g = grad_slot(n.inputs[k]);
          for (std::size_t i = 0; i < dy.rows(); ++i) {
            const std::size_t target = part.rows() == 1 ? 0 : i;
            for (std::size_t j = 0; j < part.cols(); ++j) {
              g(target, j) += dy(i, offset + j);
            }
          }
        }
        offset += part.cols();
      }
      break;
    }
    case Op::kSum:
    case Op::kMean: {
      if (wants(0)) {
        Tensor<T>& g = grad_slot(n.inputs[0]);
        const T share = n.op == Op::kSum ? dy[0] : dy[0] / static_cast<T>(g.size());
        for (auto& v : g.values()) v += share;
      }
      break;
    }
    case Op::kPopStd: {
      if (wants(0) && y[0] > T(0)) {
        const Tensor<T>& x = nodes_[n.inputs[0]].value();
        const T count = static_cast<T>(x.size());
        T total = 0;
        for (T v : x.values()) total += v;
        const T mu = total / count;
        Tensor<T>& g = grad_slot(n.inputs[0]);
        const T factor = dy[0] / (count * y[0]);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += factor * (x[i] - mu);
      }
      break;
    }
    case Op::kHinge: {
      if (wants(0)) {
        const Tensor<T>& x = nodes_[n.inputs[0]].value();
        Tensor<T>& g = grad_slot(n.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (n.constant - x[i] > T(0)) g[i] -= dy[i];
        }
      }
      break;
    }
  }
}

template <class T>
const Tensor<T>& Tape<T>::grad(Var v) const {
  const Node& n = node(v, "grad");
  if (!has_gradients_) throw StateError("grad: backward() has not run");
  if (n.grad.empty()) {
    const Tensor<T>& value = n.value();
    n.grad = Tensor<T>(value.rows(), value.cols());
  }
  return n.grad;
}

template class Tape<float>;
template class Tape<double>;

}  // namespace catchphrase
