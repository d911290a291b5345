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

#include "catchphrase/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "catchphrase/errors.hpp"

namespace catchphrase {

template <class T>
Tensor<T>::Tensor(std::size_t rows, std::size_t cols, T fill)
    : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("tensor extents must be positive, got " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
  data_.assign(rows * cols, fill);
}

template <class T>
Tensor<T>::Tensor(std::size_t rows, std::size_t cols, std::vector<T> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows == 0 || cols == 0 || data_.size() != rows * cols) {
    throw DimensionError("tensor data of length " + std::to_string(data_.size()) +
                         " does not fit shape " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
}

template <class T>
Tensor<T> Tensor<T>::row_vector(std::span<const T> values) {
  return Tensor(1, values.size(), std::vector<T>(values.begin(), values.end()));
}

template <class T>
T Tensor<T>::item() const {
  if (rows_ != 1 || cols_ != 1) {
    throw DimensionError("item() on a " + shape_string() + " tensor");
  }
  return data_[0];
}

template <class T>
void Tensor<T>::fill(T value) {
  std::fill(data_.begin(), data_.end(), value);
}

template <class T>
bool Tensor<T>::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](T v) { return std::isfinite(v); });
}

template <class T>
std::string Tensor<T>::shape_string() const {
  return "[" + std::to_string(rows_) + "x" + std::to_string(cols_) + "]";
}

template <class T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b,
                        const char* operation) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(operation) + ": shape mismatch " +
                         a.shape_string() + " vs " + b.shape_string());
  }
}

template class Tensor<float>;
template class Tensor<double>;
template void require_same_shape(const Tensor<float>&, const Tensor<float>&, const char*);
template void require_same_shape(const Tensor<double>&, const Tensor<double>&, const char*);

}  // namespace catchphrase
