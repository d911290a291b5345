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

#include <cstdint>
#include <span>
#include <vector>

#include "catchphrase/tensor.hpp"

namespace catchphrase {

// Adam moments for a fixed list of parameter tensors.
template <class T>
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<Tensor<T>> first_moment;
  std::vector<Tensor<T>> second_moment;

  // Zero moments shaped like `params`.
  static AdamState for_parameters(std::span<const Tensor<T>> params);
};

// L2 norm over all entries of all tensors, accumulated in double.
template <class T>
double global_norm(std::span<const Tensor<T>> grads);

// Rescales every gradient by max_norm / norm when the global norm exceeds
// max_norm. Returns the norm before clipping. max_norm must be positive.
template <class T>
double clip_global_norm(std::span<Tensor<T>> grads, double max_norm);

// One bias-corrected Adam update:
//   m <- b1 m + (1 - b1) g,   v <- b2 v + (1 - b2) g^2,
//   p <- p - lr * m_hat / (sqrt(v_hat) + eps).
// Throws NumericError, leaving params and state untouched, when any
// gradient component is non-finite; DimensionError on shape mismatch.
template <class T>
void adam_step(AdamState<T>& state, std::span<Tensor<T>> params,
               std::span<const Tensor<T>> grads, double learning_rate);

}  // namespace catchphrase
