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

#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "catchphrase/tensor.hpp"

namespace catchphrase {

// Reverse-mode gradient tape for the fixed set of operations the scoring
// model and its loss need. Operations are recorded in call order; backward()
// walks them in exact reverse order and accumulates gradients additively,
// so a parameter used on several paths receives the sum of its
// contributions.
//
// A tape is confined to one thread. Parameters are borrowed, not copied:
// they must outlive the tape and stay unmodified until backward() returns.
template <class T>
class Tape {
 public:
  struct Var {
    std::size_t id = std::numeric_limits<std::size_t>::max();
    bool valid() const { return id != std::numeric_limits<std::size_t>::max(); }
  };

  Var constant(Tensor<T> value);
  Var parameter(const Tensor<T>& value);

  const Tensor<T>& value(Var v) const;
  std::size_t size() const { return nodes_.size(); }
  void clear();

  // x: n x k, w: m x k -> n x m (x times w transposed).
  Var matmul_nt(Var x, Var w);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  // Adds a 1 x m row to every row of an n x m tensor.
  Var add_row(Var x, Var row);
  Var scale(Var x, T factor);
  Var relu(Var x);
  Var tanh(Var x);
  Var sigmoid(Var x);
  // Per-column maximum, 1 x m. Ties resolve to the lowest row, and only the
  // winning row receives gradient.
  Var max_over_rows(Var x);
  // Stacks inputs with equal column counts.
  Var concat_rows(std::span<const Var> parts);
  // Joins inputs side by side; 1-row inputs broadcast to the common row
  // count.
  Var concat_cols(std::span<const Var> parts);
  Var sum(Var x);
  Var mean(Var x);
  // Population standard deviation over all entries. Its gradient at zero
  // spread is taken as zero.
  Var pop_std(Var x);
  // max(margin - x, 0) elementwise; at equality the zero branch wins.
  Var hinge(Var x, T margin);

  // Throws StateError when `loss` was not recorded on this tape and
  // DimensionError when it is not 1 x 1.
  void backward(Var loss);

  // Gradient of the last backward() target with respect to `v`; a zero
  // tensor when `v` does not influence it. Throws StateError before
  // backward().
  const Tensor<T>& grad(Var v) const;

 private:
  enum class Op {
    kConstant, kParameter, kMatmulNt, kAdd, kSub, kAddRow, kScale, kRelu,
    kTanh, kSigmoid, kMaxOverRows, kConcatRows, kConcatCols, kSum, kMean,
    kPopStd, kHinge
  };

  struct Node {
    Op op;
    std::vector<std::size_t> inputs;
    Tensor<T> owned;
    const Tensor<T>* borrowed = nullptr;
    bool requires_grad = false;
    T constant = T(0);
    std::vector<std::size_t> argmax;
    mutable Tensor<T> grad;

    const Tensor<T>& value() const { return borrowed ? *borrowed : owned; }
  };

  const Node& node(Var v, const char* operation) const;
  Var push(Op op, std::vector<std::size_t> inputs, Tensor<T> value);
  Tensor<T>& grad_slot(std::size_t id);
  void backward_node(std::size_t id);

  std::vector<Node> nodes_;
  bool has_gradients_ = false;
};

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace catchphrase
